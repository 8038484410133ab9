#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "frozenlake/core.hpp"
#include "frozenlake/parallel.hpp"
#include "frozenlake/pathfinding.hpp"
#include "frozenlake/rng.hpp"

namespace frozenlake {

/// Rejection-sampling constraints for one batch of random maps.
struct GenConstraints {
  int size = 4;
  double hole_prob = 0.1;
  std::optional<int> d_inf_min;
  std::optional<int> d_inf_max;
  bool require_solvable = true;
  int max_rejections = 100000;
};

struct SplitEntry {
  GenConstraints constraints;
  int count = 1;
  // When set, each generated map is embedded at a random offset into a
  // fresh map of this size; start-goal distance is inherited from the
  // source while the rendered size is fixed.
  std::optional<int> embed_into;
};

/// Declarative corpus description: (spec, seed) fully determines the maps.
struct SplitSpec {
  std::string name;
  std::vector<SplitEntry> entries;
  std::uint64_t seed = 0;
};

struct EmbedSpec {
  int target_size = 10;
  Map source;
};

class ExhaustedRejections : public std::runtime_error {
 public:
  ExhaustedRejections(const std::string& what, int attempts)
      : std::runtime_error(what), attempts_(attempts) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_ = 0;
};

/// Configuration errors collect every violated field so a bad spec can be
/// fixed in one pass.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& vs) {
    std::string out = "invalid configuration";
    for (const auto& v : vs) {
      out += "\n  - ";
      out += v;
    }
    return out;
  }
  std::vector<std::string> violations_;
};

inline void check_constraints(const GenConstraints& c,
                              std::vector<std::string>& violations,
                              const std::string& where) {
  if (c.size < kMinMapSize || c.size > kMaxMapSize) {
    violations.push_back(where + "size must be in [2, 64]");
  }
  if (!(c.hole_prob >= 0.0 && c.hole_prob < 1.0)) {
    violations.push_back(where + "hole_prob must be in [0, 1)");
  }
  if (c.d_inf_min && c.d_inf_max && *c.d_inf_min > *c.d_inf_max) {
    violations.push_back(where + "d_inf_min must not exceed d_inf_max");
  }
  if (c.d_inf_max && *c.d_inf_max > c.size - 1) {
    violations.push_back(where + "d_inf_max must not exceed size-1");
  }
  if (c.d_inf_min && *c.d_inf_min < 0) {
    violations.push_back(where + "d_inf_min must be non-negative");
  }
  if (c.max_rejections < 1) {
    violations.push_back(where + "max_rejections must be at least 1");
  }
}

inline void validate_constraints(const GenConstraints& c) {
  std::vector<std::string> violations;
  check_constraints(c, violations, "");
  if (!violations.empty()) throw ConfigError(std::move(violations));
}

/// Draws one map: every cell becomes a hole independently with hole_prob,
/// then player and goal are placed uniformly on distinct non-hole cells
/// (holes first, then player, then goal). The whole candidate is rejected
/// and redrawn until the distance bounds and, when required, solvability
/// hold. Throws ExhaustedRejections when max_rejections candidates failed.
inline Map generate_map(const GenConstraints& c, SplitRng& rng) {
  validate_constraints(c);
  const int n = c.size;
  for (int attempt = 0; attempt < c.max_rejections; ++attempt) {
    Map m;
    m.rows = n;
    m.cols = n;
    std::vector<Pos> free_cells;
    free_cells.reserve(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r) {
      for (int col = 0; col < n; ++col) {
        if (rng.bernoulli(c.hole_prob)) {
          m.holes.push_back({r, col});
        } else {
          free_cells.push_back({r, col});
        }
      }
    }
    if (free_cells.size() < 2) continue;
    const auto player_idx = rng.below(free_cells.size());
    m.player = free_cells[player_idx];
    free_cells.erase(free_cells.begin() + static_cast<std::ptrdiff_t>(player_idx));
    m.goal = free_cells[rng.below(free_cells.size())];

    const int d = d_inf(m.player, m.goal);
    if (c.d_inf_min && d < *c.d_inf_min) continue;
    if (c.d_inf_max && d > *c.d_inf_max) continue;
    if (c.require_solvable && !is_solvable(m)) continue;
    return m;
  }
  throw ExhaustedRejections(
      "generate_map: no candidate satisfied the constraints after " +
          std::to_string(c.max_rejections) + " attempts (size " +
          std::to_string(n) + ")",
      c.max_rejections);
}

/// Embeds `spec.source` into a fresh spec.target_size map: target holes are
/// drawn per cell with hole_prob, the target keeps no player/goal of its
/// own, and a uniformly random aligned sub-rectangle is overwritten with
/// the source cells, player and goal. The source's solution replays
/// unchanged on the result.
inline Map embed_map(const EmbedSpec& spec, SplitRng& rng,
                     double hole_prob = 0.1) {
  const Map& src = spec.source;
  const int n = spec.target_size;
  if (n < src.rows || n < src.cols || n > kMaxMapSize) {
    throw std::invalid_argument("embed_map: target size must fit the source");
  }
  std::vector<Pos> holes;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (rng.bernoulli(hole_prob)) holes.push_back({r, c});
    }
  }
  const int off_r = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - src.rows + 1)));
  const int off_c = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - src.cols + 1)));

  Map out;
  out.rows = n;
  out.cols = n;
  for (const Pos& h : holes) {
    const bool inside = h.row >= off_r && h.row < off_r + src.rows &&
                        h.col >= off_c && h.col < off_c + src.cols;
    if (!inside) out.holes.push_back(h);
  }
  for (const Pos& h : src.holes) {
    out.holes.push_back({h.row + off_r, h.col + off_c});
  }
  out.player = {src.player.row + off_r, src.player.col + off_c};
  out.goal = {src.goal.row + off_r, src.goal.col + off_c};
  validate_map(out);
  return out;
}

inline void validate_split_spec(const SplitSpec& spec) {
  std::vector<std::string> violations;
  if (spec.name.empty()) violations.push_back("name must not be empty");
  if (spec.entries.empty()) violations.push_back("entries must not be empty");
  for (std::size_t i = 0; i < spec.entries.size(); ++i) {
    const auto& entry = spec.entries[i];
    const std::string where = "entries[" + std::to_string(i) + "]: ";
    if (entry.count < 1) violations.push_back(where + "count must be at least 1");
    check_constraints(entry.constraints, violations, where);
    if (entry.embed_into) {
      if (*entry.embed_into < entry.constraints.size) {
        violations.push_back(where + "embed_into must not be smaller than size");
      }
      if (*entry.embed_into > kMaxMapSize) {
        violations.push_back(where + "embed_into must not exceed 64");
      }
    }
  }
  if (!violations.empty()) throw ConfigError(std::move(violations));
}

namespace detail {

inline std::string split_map_id(const std::string& name, std::size_t index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 5) digits.insert(0, 5 - digits.size(), '0');
  return name + "-" + digits;
}

}  // namespace detail

/// Materializes a split. Each map index owns an independent RNG stream
/// derived from (seed, entry, index), so generation parallelizes without
/// affecting the result: rebuilding from the same spec is byte-identical.
inline std::vector<Map> build_split(const SplitSpec& spec) {
  validate_split_spec(spec);
  std::vector<std::pair<std::size_t, std::size_t>> slots;  // (entry, index)
  for (std::size_t e = 0; e < spec.entries.size(); ++e) {
    for (int i = 0; i < spec.entries[e].count; ++i) {
      slots.emplace_back(e, static_cast<std::size_t>(i));
    }
  }
  std::vector<Map> maps(slots.size());
  parallel_for(slots.size(), [&](std::size_t k) {
    const auto [e, i] = slots[k];
    const auto& entry = spec.entries[e];
    const std::uint64_t seed = stream_seed(spec.seed, e, i);
    SplitRng rng(seed);
    Map m = generate_map(entry.constraints, rng);
    if (entry.embed_into) {
      m = embed_map({*entry.embed_into, std::move(m)}, rng,
                    entry.constraints.hole_prob);
    }
    m.id = detail::split_map_id(spec.name, k);
    m.seed = seed;
    maps[k] = std::move(m);
  });
  return maps;
}

// --- split spec JSON ---------------------------------------------------------
//
// {"name": str, "seed": int, "entries": [{"count": int, "size": int,
//  "hole_prob"?: num, "d_inf_min"?: int, "d_inf_max"?: int,
//  "require_solvable"?: bool, "max_rejections"?: int, "embed_into"?: int}]}

inline SplitSpec split_spec_from_json(const json& j) {
  std::vector<std::string> violations;
  SplitSpec spec;

  static const std::vector<std::string> kTopKeys = {"name", "seed", "entries"};
  static const std::vector<std::string> kEntryKeys = {
      "count", "size", "hole_prob", "d_inf_min", "d_inf_max",
      "require_solvable", "max_rejections", "embed_into"};

  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(kTopKeys.begin(), kTopKeys.end(), key) == kTopKeys.end()) {
      violations.push_back("unknown key '" + key + "'");
    }
  }
  if (!j.contains("name") || !j.at("name").is_string()) {
    violations.push_back("name must be a string");
  } else {
    spec.name = j.at("name").get<std::string>();
  }
  if (!j.contains("seed") || !j.at("seed").is_number_unsigned()) {
    violations.push_back("seed must be an unsigned integer");
  } else {
    spec.seed = j.at("seed").get<std::uint64_t>();
  }
  if (!j.contains("entries") || !j.at("entries").is_array()) {
    violations.push_back("entries must be an array");
  } else {
    std::size_t idx = 0;
    for (const auto& ej : j.at("entries")) {
      const std::string where = "entries[" + std::to_string(idx) + "]: ";
      SplitEntry entry;
      if (!ej.is_object()) {
        violations.push_back(where + "must be an object");
        ++idx;
        continue;
      }
      for (const auto& [key, value] : ej.items()) {
        (void)value;
        if (std::find(kEntryKeys.begin(), kEntryKeys.end(), key) ==
            kEntryKeys.end()) {
          violations.push_back(where + "unknown key '" + key + "'");
        }
      }
      auto int_field = [&](const char* key, int fallback,
                           bool required) -> int {
        if (!ej.contains(key)) {
          if (required) violations.push_back(where + std::string(key) + " is required");
          return fallback;
        }
        if (!ej.at(key).is_number_integer() &&
            !ej.at(key).is_number_unsigned()) {
          violations.push_back(where + std::string(key) + " must be an integer");
          return fallback;
        }
        return ej.at(key).get<int>();
      };
      entry.count = int_field("count", 1, true);
      entry.constraints.size = int_field("size", 4, true);
      if (ej.contains("hole_prob")) {
        if (!ej.at("hole_prob").is_number()) {
          violations.push_back(where + "hole_prob must be a number");
        } else {
          entry.constraints.hole_prob = ej.at("hole_prob").get<double>();
        }
      }
      if (ej.contains("d_inf_min")) entry.constraints.d_inf_min = int_field("d_inf_min", 0, false);
      if (ej.contains("d_inf_max")) entry.constraints.d_inf_max = int_field("d_inf_max", 0, false);
      if (ej.contains("require_solvable")) {
        if (!ej.at("require_solvable").is_boolean()) {
          violations.push_back(where + "require_solvable must be a boolean");
        } else {
          entry.constraints.require_solvable = ej.at("require_solvable").get<bool>();
        }
      }
      if (ej.contains("max_rejections")) {
        entry.constraints.max_rejections = int_field("max_rejections", 100000, false);
      }
      if (ej.contains("embed_into")) entry.embed_into = int_field("embed_into", 0, false);
      spec.entries.push_back(std::move(entry));
      ++idx;
    }
  }
  if (!violations.empty()) throw ConfigError(std::move(violations));
  validate_split_spec(spec);
  return spec;
}

inline json split_spec_to_json(const SplitSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["seed"] = spec.seed;
  json entries = json::array();
  for (const auto& entry : spec.entries) {
    json ej;
    ej["count"] = entry.count;
    ej["size"] = entry.constraints.size;
    ej["hole_prob"] = entry.constraints.hole_prob;
    if (entry.constraints.d_inf_min) ej["d_inf_min"] = *entry.constraints.d_inf_min;
    if (entry.constraints.d_inf_max) ej["d_inf_max"] = *entry.constraints.d_inf_max;
    ej["require_solvable"] = entry.constraints.require_solvable;
    ej["max_rejections"] = entry.constraints.max_rejections;
    if (entry.embed_into) ej["embed_into"] = *entry.embed_into;
    entries.push_back(std::move(ej));
  }
  j["entries"] = std::move(entries);
  return j;
}

}  // namespace frozenlake
