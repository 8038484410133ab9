#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "frozenlake/core.hpp"
#include "frozenlake/hash.hpp"
#include "frozenlake/pathfinding.hpp"
#include "frozenlake/textformats.hpp"
#include "frozenlake/traces.hpp"

namespace frozenlake {

constexpr std::string_view kMapSlot = "{map}";

/// Placeholder text substituted for the map when the input format is an
/// image; the raster itself travels as a sibling file.
constexpr std::string_view kImageSlotText =
    "[The map is provided as an attached image.]";

/// Prompt template with exactly one {map} placeholder.
struct PromptTemplate {
  std::string text;
};

inline PromptTemplate make_prompt_template(std::string text) {
  const auto first = text.find(kMapSlot);
  if (first == std::string::npos) {
    throw std::invalid_argument("prompt template: missing {map} placeholder");
  }
  if (text.find(kMapSlot, first + 1) != std::string::npos) {
    throw std::invalid_argument(
        "prompt template: more than one {map} placeholder");
  }
  return PromptTemplate{std::move(text)};
}

inline const PromptTemplate& default_prompt_template() {
  static const PromptTemplate tpl = make_prompt_template(
      "You are playing a grid-based puzzle game on a frozen lake.\n"
      "The lake is a grid of cells. One cell holds the player, another one "
      "holds the goal, and some cells are holes in the ice.\n"
      "Your task is to guide the player from its starting cell to the goal "
      "cell.\n"
      "The possible moves are UP, DOWN, LEFT and RIGHT; each move shifts "
      "the player by one cell.\n"
      "The player must never enter a cell with a hole, and the sequence of "
      "moves must end exactly on the goal cell.\n"
      "\n"
      "{map}\n"
      "\n"
      "Find a sequence of moves that solves the map. End your reply with a "
      "single line of the form:\n"
      "Final answer: \\boxed{MOVE_1, MOVE_2, ...}\n");
  return tpl;
}

inline std::string template_hash(const PromptTemplate& tpl) {
  return sha256_hex(tpl.text);
}

inline std::string instantiate_prompt(const PromptTemplate& tpl,
                                      std::string_view map_text) {
  std::string out = tpl.text;
  out.replace(out.find(kMapSlot), kMapSlot.size(), map_text);
  return out;
}

struct SampleMeta {
  int size = 0;
  int d_inf = 0;
  int optimal_length = 0;
  std::string split;
};

struct SampleRecord {
  std::string id;
  FormatKind input_format = FormatKind::Grid;
  TraceFormat cot_format = TraceFormat::None;
  std::string prompt;
  std::string target;  // empty for eval records
  SampleMeta meta;
  std::optional<std::string> image_ref;
};

/// Writes image bytes for a map and returns the reference string recorded
/// in the JSONL line (typically a relative path).
using ImageSink = std::function<std::string(const Map&, const std::string&)>;

namespace detail {

inline std::string input_slot_text(const Map& m, FormatKind fmt) {
  switch (fmt) {
    case FormatKind::Grid: return emit_grid(m);
    case FormatKind::Table: return emit_table(m);
    case FormatKind::Description: return emit_description(m);
    case FormatKind::Image: return std::string(kImageSlotText);
  }
  return emit_grid(m);
}

inline SampleMeta meta_for(const Map& m, int optimal_length,
                           std::string_view split) {
  return SampleMeta{m.rows, d_inf(m.player, m.goal), optimal_length,
                    std::string(split)};
}

inline json meta_to_json(const SampleMeta& meta) {
  json j;
  j["size"] = meta.size;
  j["d_inf"] = meta.d_inf;
  j["optimal_length"] = meta.optimal_length;
  j["split"] = meta.split;
  return j;
}

inline SampleMeta meta_from_json(const json& j) {
  SampleMeta meta;
  meta.size = j.at("size").get<int>();
  meta.d_inf = j.at("d_inf").get<int>();
  meta.optimal_length = j.at("optimal_length").get<int>();
  meta.split = j.at("split").get<std::string>();
  return meta;
}

}  // namespace detail

/// Builds the records for one (input format, CoT format) dataset slice.
/// Every map must be solvable; targets are the synthesized traces of the
/// canonical shortest path. Records come back ordered by id.
inline std::vector<SampleRecord> build_sft_records(
    const std::vector<Map>& corpus, std::string_view split_name,
    FormatKind input_fmt, TraceFormat cot_fmt, const PromptTemplate& tpl,
    const ImageSink* images = nullptr, const RenderConfig& render_cfg = {}) {
  if (input_fmt == FormatKind::Image && images == nullptr) {
    throw std::invalid_argument("image export requires an image sink");
  }
  std::vector<SampleRecord> records;
  records.reserve(corpus.size());
  for (const Map& m : corpus) {
    const auto path = astar_shortest(m);
    if (!path) {
      throw std::invalid_argument("corpus map " + m.id + " is unsolvable");
    }
    SampleRecord rec;
    rec.id = m.id;
    rec.input_format = input_fmt;
    rec.cot_format = cot_fmt;
    rec.prompt = instantiate_prompt(tpl, detail::input_slot_text(m, input_fmt));
    rec.target = synthesize_trace(m, path->moves, cot_fmt).text;
    rec.meta = detail::meta_for(m, path->length, split_name);
    if (input_fmt == FormatKind::Image) {
      rec.image_ref = (*images)(m, render_image(m, render_cfg));
    }
    records.push_back(std::move(rec));
  }
  std::sort(records.begin(), records.end(),
            [](const SampleRecord& a, const SampleRecord& b) { return a.id < b.id; });
  return records;
}

inline json sample_to_json(const SampleRecord& rec, bool with_target) {
  json j;
  j["id"] = rec.id;
  j["input_format"] = std::string(format_name(rec.input_format));
  if (with_target) j["cot_format"] = std::string(trace_format_name(rec.cot_format));
  if (rec.image_ref) j["image"] = *rec.image_ref;
  j["prompt"] = rec.prompt;
  if (with_target) j["target"] = rec.target;
  j["meta"] = detail::meta_to_json(rec.meta);
  return j;
}

/// One JSON object per line; returns the number of lines written.
inline std::size_t export_sft(const std::vector<Map>& corpus,
                              std::string_view split_name, FormatKind input_fmt,
                              TraceFormat cot_fmt, const PromptTemplate& tpl,
                              std::ostream& out,
                              const ImageSink* images = nullptr,
                              const RenderConfig& render_cfg = {}) {
  const auto records = build_sft_records(corpus, split_name, input_fmt, cot_fmt,
                                         tpl, images, render_cfg);
  for (const auto& rec : records) {
    out << sample_to_json(rec, /*with_target=*/true).dump() << '\n';
  }
  return records.size();
}

/// Prompt-plus-metadata export for evaluation: no targets.
inline std::size_t export_eval(const std::vector<Map>& corpus,
                               std::string_view split_name,
                               FormatKind input_fmt, const PromptTemplate& tpl,
                               std::ostream& out,
                               const ImageSink* images = nullptr,
                               const RenderConfig& render_cfg = {}) {
  auto records = build_sft_records(corpus, split_name, input_fmt,
                                   TraceFormat::None, tpl, images, render_cfg);
  for (auto& rec : records) {
    out << sample_to_json(rec, /*with_target=*/false).dump() << '\n';
  }
  return records.size();
}

/// Schema check for exported lines; returns every violation (empty means
/// the line is valid).
inline std::vector<std::string> validate_sample_line(const json& j,
                                                     bool expect_target) {
  std::vector<std::string> problems;
  auto need_string = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_string()) {
      problems.push_back(std::string(key) + " must be a string");
      return false;
    }
    return true;
  };
  need_string("id");
  if (need_string("input_format") &&
      !format_from_name(j.at("input_format").get<std::string>())) {
    problems.push_back("input_format must name a map representation");
  }
  if (expect_target) {
    if (need_string("cot_format") &&
        !trace_format_from_name(j.at("cot_format").get<std::string>())) {
      problems.push_back("cot_format must name a trace format");
    }
    if (need_string("target")) {
      const auto& target = j.at("target").get_ref<const std::string&>();
      if (target.find("Final answer: \\boxed{") == std::string::npos) {
        problems.push_back("target must end with a boxed final answer");
      }
    }
  }
  need_string("prompt");
  if (!j.contains("meta") || !j.at("meta").is_object()) {
    problems.push_back("meta must be an object");
  } else {
    for (const char* key : {"size", "d_inf", "optimal_length"}) {
      if (!j.at("meta").contains(key) || !j.at("meta").at(key).is_number_integer()) {
        problems.push_back(std::string("meta.") + key + " must be an integer");
      }
    }
    if (!j.at("meta").contains("split") || !j.at("meta").at("split").is_string()) {
      problems.push_back("meta.split must be a string");
    }
  }
  return problems;
}

}  // namespace frozenlake
