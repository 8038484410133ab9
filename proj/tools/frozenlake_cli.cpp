// Command-line front end wiring map generation, solving, trace synthesis,
// dataset export, batch inference and scoring into reproducible pipelines.
// Every subcommand is deterministic for fixed inputs and seeds and writes a
// manifest next to its outputs.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frozenlake/core.hpp"
#include "frozenlake/dataset.hpp"
#include "frozenlake/eval.hpp"
#include "frozenlake/gateway.hpp"
#include "frozenlake/hash.hpp"
#include "frozenlake/mapgen.hpp"
#include "frozenlake/pathfinding.hpp"
#include "frozenlake/textformats.hpp"
#include "frozenlake/traces.hpp"

namespace fs = std::filesystem;
using frozenlake::json;

namespace {

std::vector<frozenlake::Map> load_corpus(const fs::path& dir) {
  const fs::path maps_dir = dir / "maps";
  if (!fs::is_directory(maps_dir)) {
    throw std::runtime_error("corpus has no maps/ directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(maps_dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<frozenlake::Map> maps;
  maps.reserve(files.size());
  for (const auto& file : files) {
    maps.push_back(frozenlake::map_from_json(json::parse(frozenlake::read_file(file))));
  }
  return maps;
}

/// Content hash of a corpus: map JSON bytes in id order.
std::string corpus_hash(const std::vector<frozenlake::Map>& maps) {
  std::string material;
  for (const auto& m : maps) material += frozenlake::map_to_json(m).dump();
  return frozenlake::sha256_hex(material);
}

void write_manifest(const fs::path& out_dir, const std::string& name,
                    json content) {
  content["tool"] = "frozenlake";
  frozenlake::write_file(out_dir / name, content.dump(2) + "\n");
}

frozenlake::PromptTemplate load_template_or_default(const std::string& path) {
  if (path.empty()) return frozenlake::default_prompt_template();
  return frozenlake::make_prompt_template(frozenlake::read_file(path));
}

frozenlake::FormatKind parse_input_format(const std::string& name) {
  const auto fmt = frozenlake::format_from_name(name);
  if (!fmt) {
    throw frozenlake::ConfigError({"input format must be one of image, "
                                   "description, table, grid (got '" +
                                   name + "')"});
  }
  return *fmt;
}

frozenlake::TraceFormat parse_trace_format(const std::string& name) {
  const auto fmt = frozenlake::trace_format_from_name(name);
  if (!fmt) {
    throw frozenlake::ConfigError(
        {"trace format must be one of description, grid, table, "
         "grid_description, table_description, none (got '" +
         name + "')"});
  }
  return *fmt;
}

int cmd_gen(const std::string& spec_path, const std::string& out) {
  const std::string spec_bytes = frozenlake::read_file(spec_path);
  const auto spec = frozenlake::split_spec_from_json(json::parse(spec_bytes));
  const auto maps = frozenlake::build_split(spec);

  const fs::path out_dir(out);
  fs::create_directories(out_dir / "maps");
  for (const auto& m : maps) {
    frozenlake::write_file(out_dir / "maps" / (m.id + ".json"),
                           frozenlake::map_to_json(m).dump(2) + "\n");
  }
  json manifest;
  manifest["command"] = "gen";
  manifest["name"] = spec.name;
  manifest["seed"] = spec.seed;
  manifest["spec_hash"] = frozenlake::sha256_hex(spec_bytes);
  manifest["spec"] = frozenlake::split_spec_to_json(spec);
  manifest["counts"] = {{"total", maps.size()}};
  manifest["corpus_hash"] = corpus_hash(maps);
  write_manifest(out_dir, "manifest.json", std::move(manifest));
  std::cout << "wrote " << maps.size() << " maps to " << out_dir.string() << "\n";
  return 0;
}

int cmd_solve(const std::string& corpus, const std::string& out) {
  const auto maps = load_corpus(corpus);
  const fs::path out_dir(out);
  fs::create_directories(out_dir);
  std::ofstream stream(out_dir / "solutions.jsonl");
  for (const auto& m : maps) {
    json line;
    line["id"] = m.id;
    const auto path = frozenlake::astar_shortest(m);
    if (path) {
      line["solvable"] = true;
      line["moves"] = frozenlake::moves_to_json(path->moves);
      line["optimal_length"] = path->length;
    } else {
      line["solvable"] = false;
    }
    line["d_inf"] = frozenlake::d_inf(m.player, m.goal);
    line["size"] = m.rows;
    stream << line.dump() << '\n';
  }
  json manifest;
  manifest["command"] = "solve";
  manifest["corpus_hash"] = corpus_hash(maps);
  manifest["counts"] = {{"total", maps.size()}};
  write_manifest(out_dir, "solve_manifest.json", std::move(manifest));
  std::cout << "solved " << maps.size() << " maps\n";
  return 0;
}

int cmd_trace(const std::string& corpus, const std::string& format,
              const std::string& out) {
  const auto fmt = parse_trace_format(format);
  const auto maps = load_corpus(corpus);
  const fs::path out_dir(out);
  fs::create_directories(out_dir / "traces");
  for (const auto& m : maps) {
    const auto path = frozenlake::astar_shortest(m);
    if (!path) throw std::runtime_error("map " + m.id + " is unsolvable");
    const auto trace = frozenlake::synthesize_trace(m, path->moves, fmt);
    frozenlake::write_file(out_dir / "traces" / (m.id + ".txt"), trace.text);
    frozenlake::write_file(
        out_dir / "traces" / (m.id + ".json"),
        frozenlake::trace_sidecar_json(trace, fmt).dump(2) + "\n");
  }
  json manifest;
  manifest["command"] = "trace";
  manifest["format"] = std::string(frozenlake::trace_format_name(fmt));
  manifest["corpus_hash"] = corpus_hash(maps);
  manifest["counts"] = {{"total", maps.size()}};
  write_manifest(out_dir, "trace_manifest.json", std::move(manifest));
  std::cout << "wrote " << maps.size() << " traces\n";
  return 0;
}

int cmd_render(const std::string& corpus, const std::string& out, int cell_px,
               bool gridlines) {
  const auto maps = load_corpus(corpus);
  frozenlake::RenderConfig cfg;
  cfg.cell_px = cell_px;
  cfg.include_gridlines = gridlines;
  const fs::path out_dir(out);
  fs::create_directories(out_dir / "images");
  for (const auto& m : maps) {
    frozenlake::write_file(out_dir / "images" / (m.id + ".ppm"),
                           frozenlake::render_image(m, cfg));
  }
  json manifest;
  manifest["command"] = "render";
  manifest["cell_px"] = cfg.cell_px;
  manifest["gridlines"] = cfg.include_gridlines;
  manifest["corpus_hash"] = corpus_hash(maps);
  manifest["counts"] = {{"total", maps.size()}};
  write_manifest(out_dir, "render_manifest.json", std::move(manifest));
  std::cout << "rendered " << maps.size() << " images\n";
  return 0;
}

std::string split_name_of(const std::vector<frozenlake::Map>& maps,
                          const fs::path& corpus_dir) {
  // the split name is recorded in the corpus manifest; fall back to the
  // common id prefix for hand-built corpora
  const fs::path manifest_path = corpus_dir / "manifest.json";
  if (fs::exists(manifest_path)) {
    const json manifest = json::parse(frozenlake::read_file(manifest_path));
    if (manifest.contains("name")) return manifest.at("name").get<std::string>();
  }
  if (!maps.empty()) {
    const auto& id = maps.front().id;
    const auto dash = id.rfind('-');
    if (dash != std::string::npos) return id.substr(0, dash);
  }
  return "corpus";
}

int cmd_export(bool eval_mode, const std::string& corpus,
               const std::string& input_format, const std::string& cot_format,
               const std::string& template_path, const std::string& out,
               int cell_px) {
  const auto input_fmt = parse_input_format(input_format);
  const auto cot_fmt =
      eval_mode ? frozenlake::TraceFormat::None : parse_trace_format(cot_format);
  const auto tpl = load_template_or_default(template_path);
  const auto maps = load_corpus(corpus);
  const std::string split = split_name_of(maps, corpus);

  const fs::path out_dir(out);
  fs::create_directories(out_dir);
  frozenlake::RenderConfig render_cfg;
  render_cfg.cell_px = cell_px;
  frozenlake::ImageSink sink = [&](const frozenlake::Map& m,
                                   const std::string& bytes) {
    fs::create_directories(out_dir / "images");
    const std::string ref = "images/" + m.id + ".ppm";
    frozenlake::write_file(out_dir / ref, bytes);
    return ref;
  };
  const frozenlake::ImageSink* sink_ptr =
      input_fmt == frozenlake::FormatKind::Image ? &sink : nullptr;

  std::string file_name;
  std::size_t count = 0;
  if (eval_mode) {
    file_name = "eval_" + std::string(frozenlake::format_name(input_fmt)) + ".jsonl";
    std::ofstream stream(out_dir / file_name);
    count = frozenlake::export_eval(maps, split, input_fmt, tpl, stream,
                                    sink_ptr, render_cfg);
  } else {
    file_name = "sft_" + std::string(frozenlake::format_name(input_fmt)) + "_" +
                std::string(frozenlake::trace_format_name(cot_fmt)) + ".jsonl";
    std::ofstream stream(out_dir / file_name);
    count = frozenlake::export_sft(maps, split, input_fmt, cot_fmt, tpl, stream,
                                   sink_ptr, render_cfg);
  }

  json manifest;
  manifest["command"] = eval_mode ? "export-eval" : "export-sft";
  manifest["file"] = file_name;
  manifest["input_format"] = std::string(frozenlake::format_name(input_fmt));
  if (!eval_mode) {
    manifest["cot_format"] = std::string(frozenlake::trace_format_name(cot_fmt));
  }
  manifest["template_hash"] = frozenlake::template_hash(tpl);
  manifest["split"] = split;
  manifest["corpus_hash"] = corpus_hash(maps);
  manifest["counts"] = {{"total", count}};
  write_manifest(out_dir, eval_mode ? "export_eval_manifest.json"
                                    : "export_sft_manifest.json",
                 std::move(manifest));
  std::cout << "wrote " << count << " lines to " << (out_dir / file_name).string()
            << "\n";
  return 0;
}

int cmd_infer(const std::string& eval_path, const frozenlake::GatewayConfig& cfg,
              const std::string& out) {
  const auto stats = frozenlake::run_batch(eval_path, cfg, out);
  std::cout << "responses: " << stats.total << " (cache " << stats.from_cache
            << ", network " << stats.network << ", errors " << stats.errors
            << ")\n";
  return 0;
}

int cmd_score(const std::string& corpus, const std::string& responses,
              const std::string& out, bool strict_off_grid, int step_cap) {
  const auto maps = load_corpus(corpus);
  std::map<std::string, const frozenlake::Map*> by_id;
  for (const auto& m : maps) by_id[m.id] = &m;

  frozenlake::ScoreOptions opts;
  opts.strict_off_grid = strict_off_grid;
  if (step_cap > 0) opts.step_cap = step_cap;

  std::ifstream in(responses);
  if (!in) throw std::runtime_error("cannot read " + responses);
  std::ofstream out_stream(out);
  if (!out_stream) throw std::runtime_error("cannot write " + out);
  std::string line;
  std::size_t scored = 0, successes = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    const std::string id = j.at("id").get<std::string>();
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw std::runtime_error("no map for response id " + id);
    const std::string response =
        j.contains("response") ? j.at("response").get<std::string>() : "";
    const auto verdict = frozenlake::score(*it->second, response, opts);
    out_stream << frozenlake::verdict_to_json(id, verdict).dump() << '\n';
    ++scored;
    successes += verdict.success ? 1 : 0;
  }
  std::cout << "scored " << scored << " responses, " << successes
            << " successes\n";
  return 0;
}

int cmd_report(const std::string& verdicts_path, const std::string& meta_path,
               const std::string& out) {
  std::vector<std::pair<std::string, frozenlake::Verdict>> verdicts;
  {
    std::ifstream in(verdicts_path);
    if (!in) throw std::runtime_error("cannot read " + verdicts_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      frozenlake::Verdict v;
      v.success = j.at("success").get<bool>();
      if (j.contains("failure")) {
        const std::string kind = j.at("failure").get<std::string>();
        for (const auto fk :
             {frozenlake::FailureKind::Hole, frozenlake::FailureKind::WrongEnd,
              frozenlake::FailureKind::Unparseable,
              frozenlake::FailureKind::Truncated,
              frozenlake::FailureKind::OffGrid}) {
          if (frozenlake::failure_name(fk) == kind) v.failure = fk;
        }
      }
      verdicts.emplace_back(j.at("id").get<std::string>(), std::move(v));
    }
  }
  std::map<std::string, frozenlake::SampleMeta> meta;
  {
    std::ifstream in(meta_path);
    if (!in) throw std::runtime_error("cannot read " + meta_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      meta[j.at("id").get<std::string>()] =
          frozenlake::detail::meta_from_json(j.at("meta"));
    }
  }
  const auto report = frozenlake::aggregate(verdicts, meta);
  const fs::path out_dir(out);
  fs::create_directories(out_dir);
  frozenlake::write_file(out_dir / "report.json",
                         frozenlake::report_to_json(report).dump(2) + "\n");
  frozenlake::write_file(out_dir / "report.csv",
                         frozenlake::report_to_csv(report));
  std::cout << "overall accuracy "
            << frozenlake::detail::format_accuracy(report.overall.accuracy())
            << " over " << report.overall.total << " samples\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FrozenLake planning benchmark toolkit"};
  app.require_subcommand(1);

  std::string spec_path, corpus, out, format, input_format, cot_format;
  std::string template_path, eval_path, responses, verdicts_path, meta_path;
  int cell_px = 32;
  bool gridlines = false;
  bool strict_off_grid = false;
  int step_cap = 0;
  frozenlake::GatewayConfig gateway;

  auto* gen = app.add_subcommand("gen", "Generate a map corpus from a split spec");
  gen->add_option("--spec", spec_path, "Split spec JSON file")->required();
  gen->add_option("--out", out, "Output corpus directory")->required();

  auto* solve = app.add_subcommand("solve", "Solve a corpus and annotate lengths");
  solve->add_option("--corpus", corpus, "Corpus directory")->required();
  solve->add_option("--out", out, "Output directory")->required();

  auto* trace = app.add_subcommand("trace", "Synthesize reasoning transcripts");
  trace->add_option("--corpus", corpus, "Corpus directory")->required();
  trace->add_option("--format", format, "Trace format")->required();
  trace->add_option("--out", out, "Output directory")->required();

  auto* render = app.add_subcommand("render", "Render corpus maps as images");
  render->add_option("--corpus", corpus, "Corpus directory")->required();
  render->add_option("--out", out, "Output directory")->required();
  render->add_option("--cell-px", cell_px, "Cell size in pixels");
  render->add_flag("--gridlines", gridlines, "Draw cell boundaries");

  auto* export_sft = app.add_subcommand("export-sft", "Export a fine-tuning JSONL");
  export_sft->add_option("--corpus", corpus, "Corpus directory")->required();
  export_sft->add_option("--input-format", input_format, "Map representation")->required();
  export_sft->add_option("--cot-format", cot_format, "Trace format")->required();
  export_sft->add_option("--template", template_path, "Prompt template file");
  export_sft->add_option("--out", out, "Output directory")->required();
  export_sft->add_option("--cell-px", cell_px, "Cell size for image input");

  auto* export_eval = app.add_subcommand("export-eval", "Export an evaluation JSONL");
  export_eval->add_option("--corpus", corpus, "Corpus directory")->required();
  export_eval->add_option("--input-format", input_format, "Map representation")->required();
  export_eval->add_option("--template", template_path, "Prompt template file");
  export_eval->add_option("--out", out, "Output directory")->required();
  export_eval->add_option("--cell-px", cell_px, "Cell size for image input");

  auto* infer = app.add_subcommand("infer", "Run batch inference over an eval file");
  infer->add_option("--eval", eval_path, "Eval JSONL file")->required();
  infer->add_option("--base-url", gateway.base_url, "Endpoint base URL")->required();
  infer->add_option("--model", gateway.model, "Model name")->required();
  infer->add_option("--path", gateway.completions_path, "Completions path");
  infer->add_option("--cache", gateway.cache_dir, "Response cache directory");
  infer->add_option("--concurrency", gateway.max_concurrency, "Max in-flight requests");
  infer->add_option("--timeout", gateway.timeout_s, "Per-request timeout (seconds)");
  infer->add_option("--retries", gateway.max_retries, "Retries per sample");
  infer->add_option("--temperature", gateway.temperature, "Sampling temperature");
  infer->add_option("--out", out, "Responses JSONL file")->required();

  auto* score = app.add_subcommand("score", "Score responses by simulation");
  score->add_option("--corpus", corpus, "Corpus directory")->required();
  score->add_option("--responses", responses, "Responses JSONL file")->required();
  score->add_option("--out", out, "Verdicts JSONL file")->required();
  score->add_flag("--strict-offgrid", strict_off_grid,
                  "Treat clamped off-grid moves as failures");
  score->add_option("--step-cap", step_cap, "Replay cap (default 4*rows*cols)");

  auto* report = app.add_subcommand("report", "Aggregate verdicts into accuracy tables");
  report->add_option("--verdicts", verdicts_path, "Verdicts JSONL file")->required();
  report->add_option("--meta", meta_path, "Eval or SFT JSONL with per-id meta")->required();
  report->add_option("--out", out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(spec_path, out);
    if (solve->parsed()) return cmd_solve(corpus, out);
    if (trace->parsed()) return cmd_trace(corpus, format, out);
    if (render->parsed()) return cmd_render(corpus, out, cell_px, gridlines);
    if (export_sft->parsed()) {
      return cmd_export(false, corpus, input_format, cot_format, template_path,
                        out, cell_px);
    }
    if (export_eval->parsed()) {
      return cmd_export(true, corpus, input_format, "none", template_path, out,
                        cell_px);
    }
    if (infer->parsed()) return cmd_infer(eval_path, gateway, out);
    if (score->parsed()) return cmd_score(corpus, responses, out, strict_off_grid, step_cap);
    if (report->parsed()) return cmd_report(verdicts_path, meta_path, out);
  } catch (const frozenlake::ConfigError& e) {
    json err;
    err["error"] = "config";
    err["violations"] = e.violations();
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    json err;
    err["error"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
