#pragma once

#include <cctype>
#include <cstdio>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "frozenlake/core.hpp"
#include "frozenlake/dataset.hpp"

namespace frozenlake {

enum class FailureKind { Hole, WrongEnd, Unparseable, Truncated, OffGrid };

constexpr std::string_view failure_name(FailureKind k) {
  switch (k) {
    case FailureKind::Hole: return "hole";
    case FailureKind::WrongEnd: return "wrong_end";
    case FailureKind::Unparseable: return "unparseable";
    case FailureKind::Truncated: return "truncated";
    case FailureKind::OffGrid: return "off_grid";
  }
  return "wrong_end";
}

struct Verdict {
  bool success = false;
  std::optional<FailureKind> failure;
  std::optional<MoveSequence> parsed_moves;
  std::optional<RolloutResult> rollout;
};

namespace detail {

inline std::optional<MoveSequence> parse_move_list(std::string_view text,
                                                   bool comma_split) {
  MoveSequence moves;
  std::string token;
  auto flush = [&]() -> bool {
    // trim surrounding whitespace and stray punctuation
    std::size_t begin = 0, end = token.size();
    auto strip = [](char c) {
      return std::isspace(static_cast<unsigned char>(c)) || c == '.' ||
             c == ',' || c == ';' || c == ':';
    };
    while (begin < end && strip(token[begin])) ++begin;
    while (end > begin && strip(token[end - 1])) --end;
    if (begin == end) return true;  // empty token: skip
    const auto mv = move_from_name(std::string_view(token).substr(begin, end - begin));
    if (!mv) return false;
    moves.push_back(*mv);
    return true;
  };
  for (const char c : text) {
    const bool boundary =
        comma_split ? c == ','
                    : (c == ',' || std::isspace(static_cast<unsigned char>(c)));
    if (boundary) {
      if (!flush()) return std::nullopt;
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  if (!flush()) return std::nullopt;
  return moves;
}

}  // namespace detail

/// Extracts the answered move sequence from a model response. The content
/// of the last well-formed \boxed{...} wins; commas separate moves and
/// names are case-insensitive. Without a box, the last line consisting
/// only of move names and separators is used. Returns nullopt when neither
/// yields moves; never throws on arbitrary input.
inline std::optional<MoveSequence> parse_response(std::string_view text) {
  static constexpr std::string_view kBox = "\\boxed{";
  std::size_t search_end = text.size();
  while (true) {
    const std::size_t at = text.rfind(kBox, search_end == 0 ? 0 : search_end - 1);
    if (at == std::string_view::npos) break;
    const std::size_t open = at + kBox.size();
    const std::size_t close = text.find('}', open);
    if (close != std::string_view::npos) {
      return detail::parse_move_list(text.substr(open, close - open),
                                     /*comma_split=*/true);
    }
    if (at == 0) break;
    search_end = at;
  }

  // fallback: last line of only move names and separators
  std::size_t line_end = text.size();
  while (line_end > 0) {
    std::size_t line_begin = text.rfind('\n', line_end - 1);
    line_begin = line_begin == std::string_view::npos ? 0 : line_begin + 1;
    const auto line = text.substr(line_begin, line_end - line_begin);
    const auto moves = detail::parse_move_list(line, /*comma_split=*/false);
    if (moves && !moves->empty()) return moves;
    if (line_begin == 0) break;
    line_end = line_begin - 1;
  }
  return std::nullopt;
}

struct ScoreOptions {
  bool strict_off_grid = false;       // count clamped moves as failures
  std::optional<int> step_cap;        // default: 4 * rows * cols
};

/// Parse, replay, classify. All failures are verdicts; scoring is pure.
inline Verdict score(const Map& m, std::string_view response,
                     const ScoreOptions& opts = {}) {
  Verdict v;
  auto parsed = parse_response(response);
  if (!parsed) {
    v.failure = FailureKind::Unparseable;
    return v;
  }
  v.parsed_moves = std::move(*parsed);
  const RolloutResult r =
      rollout(m, *v.parsed_moves, opts.step_cap.value_or(default_step_cap(m)));
  v.rollout = r;
  if (r.success && (!opts.strict_off_grid || r.off_grid_moves == 0)) {
    v.success = true;
    return v;
  }
  if (r.fell_in_hole) {
    v.failure = FailureKind::Hole;
  } else if (r.truncated) {
    v.failure = FailureKind::Truncated;
  } else if (r.success) {
    v.failure = FailureKind::OffGrid;  // strict mode only
  } else {
    v.failure = FailureKind::WrongEnd;
  }
  return v;
}

class MissingMeta : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Bucket {
  int total = 0;
  int successes = 0;
  double accuracy() const {
    return total == 0 ? 0.0 : static_cast<double>(successes) / total;
  }
};

/// Accuracy tables along the analysis axes. Buckets exist only for
/// observed keys; an empty bucket is absent rather than zero.
struct Report {
  Bucket overall;
  std::map<std::string, Bucket> by_split;
  std::map<std::string, std::map<int, Bucket>> by_split_size;
  std::map<int, Bucket> by_d_inf;
  std::map<int, Bucket> by_optimal_length;
  std::map<std::string, int> failures;
};

inline Report aggregate(
    const std::vector<std::pair<std::string, Verdict>>& verdicts,
    const std::map<std::string, SampleMeta>& meta) {
  Report report;
  for (const auto& [id, verdict] : verdicts) {
    const auto it = meta.find(id);
    if (it == meta.end()) throw MissingMeta("no metadata for sample " + id);
    const SampleMeta& m = it->second;
    const int hit = verdict.success ? 1 : 0;
    auto tally = [&](Bucket& b) {
      ++b.total;
      b.successes += hit;
    };
    tally(report.overall);
    tally(report.by_split[m.split]);
    tally(report.by_split_size[m.split][m.size]);
    tally(report.by_d_inf[m.d_inf]);
    tally(report.by_optimal_length[m.optimal_length]);
    if (!verdict.success) {
      ++report.failures[std::string(failure_name(*verdict.failure))];
    }
  }
  return report;
}

namespace detail {

inline std::string format_accuracy(double a) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", a);
  return buf;
}

inline json bucket_to_json(const Bucket& b) {
  json j;
  j["count"] = b.total;
  j["successes"] = b.successes;
  j["accuracy"] = b.accuracy();
  return j;
}

}  // namespace detail

inline json report_to_json(const Report& r) {
  json j;
  j["overall"] = detail::bucket_to_json(r.overall);
  json by_split;
  for (const auto& [split, b] : r.by_split) by_split[split] = detail::bucket_to_json(b);
  j["by_split"] = std::move(by_split);
  json by_split_size;
  for (const auto& [split, sizes] : r.by_split_size) {
    json row;
    for (const auto& [size, b] : sizes) {
      row[std::to_string(size)] = detail::bucket_to_json(b);
    }
    by_split_size[split] = std::move(row);
  }
  j["by_split_size"] = std::move(by_split_size);
  json by_d;
  for (const auto& [d, b] : r.by_d_inf) by_d[std::to_string(d)] = detail::bucket_to_json(b);
  j["by_d_inf"] = std::move(by_d);
  json by_l;
  for (const auto& [l, b] : r.by_optimal_length) by_l[std::to_string(l)] = detail::bucket_to_json(b);
  j["by_optimal_length"] = std::move(by_l);
  json failures;
  for (const auto& [kind, count] : r.failures) failures[kind] = count;
  j["failures"] = std::move(failures);
  return j;
}

/// CSV rows are metric,bucket,count,successes,accuracy; failure-kind rows
/// carry counts only.
inline std::string report_to_csv(const Report& r) {
  std::string out = "metric,bucket,count,successes,accuracy\n";
  auto row = [&](const std::string& metric, const std::string& bucket,
                 const Bucket& b) {
    out += metric + "," + bucket + "," + std::to_string(b.total) + "," +
           std::to_string(b.successes) + "," +
           detail::format_accuracy(b.accuracy()) + "\n";
  };
  row("overall", "all", r.overall);
  for (const auto& [split, b] : r.by_split) row("by_split", split, b);
  for (const auto& [split, sizes] : r.by_split_size) {
    for (const auto& [size, b] : sizes) {
      row("by_split_size", split + "/" + std::to_string(size), b);
    }
  }
  for (const auto& [d, b] : r.by_d_inf) row("by_d_inf", std::to_string(d), b);
  for (const auto& [l, b] : r.by_optimal_length) {
    row("by_optimal_length", std::to_string(l), b);
  }
  for (const auto& [kind, count] : r.failures) {
    out += "failure_kind," + kind + "," + std::to_string(count) + ",,\n";
  }
  return out;
}

inline json verdict_to_json(const std::string& id, const Verdict& v) {
  json j;
  j["id"] = id;
  j["success"] = v.success;
  if (v.failure) j["failure"] = std::string(failure_name(*v.failure));
  if (v.parsed_moves) j["moves"] = moves_to_json(*v.parsed_moves);
  if (v.rollout) {
    json r;
    r["end_pos"] = {v.rollout->end_pos.row, v.rollout->end_pos.col};
    r["fell_in_hole"] = v.rollout->fell_in_hole;
    if (v.rollout->hole_pos) {
      r["hole_pos"] = {v.rollout->hole_pos->row, v.rollout->hole_pos->col};
    }
    r["off_grid_moves"] = v.rollout->off_grid_moves;
    r["steps_executed"] = v.rollout->steps_executed;
    r["truncated"] = v.rollout->truncated;
    j["rollout"] = std::move(r);
  }
  return j;
}

}  // namespace frozenlake
