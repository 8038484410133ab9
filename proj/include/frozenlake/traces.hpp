#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "frozenlake/core.hpp"
#include "frozenlake/textformats.hpp"

namespace frozenlake {

/// Reasoning-trace flavors. 'None' is answer-only: no intermediate steps.
enum class TraceFormat {
  Description,
  Grid,
  Table,
  GridDescription,
  TableDescription,
  None,
};

constexpr std::string_view trace_format_name(TraceFormat f) {
  switch (f) {
    case TraceFormat::Description: return "description";
    case TraceFormat::Grid: return "grid";
    case TraceFormat::Table: return "table";
    case TraceFormat::GridDescription: return "grid_description";
    case TraceFormat::TableDescription: return "table_description";
    case TraceFormat::None: return "none";
  }
  return "none";
}

inline std::optional<TraceFormat> trace_format_from_name(std::string_view s) {
  if (s == "description") return TraceFormat::Description;
  if (s == "grid") return TraceFormat::Grid;
  if (s == "table") return TraceFormat::Table;
  if (s == "grid_description") return TraceFormat::GridDescription;
  if (s == "table_description") return TraceFormat::TableDescription;
  if (s == "none") return TraceFormat::None;
  return std::nullopt;
}

constexpr bool trace_has_narration(TraceFormat f) {
  return f == TraceFormat::Description || f == TraceFormat::GridDescription ||
         f == TraceFormat::TableDescription;
}

constexpr bool trace_has_state_block(TraceFormat f) {
  return f == TraceFormat::Grid || f == TraceFormat::Table ||
         f == TraceFormat::GridDescription || f == TraceFormat::TableDescription;
}

/// Thrown when a narration is asked to decide a move that enters a hole or
/// leaves the grid: the ground-truth path is corrupt.
class InconsistentTarget : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TraceStep {
  std::optional<std::string> narration;
  std::optional<std::string> state_block;
  Move move = Move::Up;
};

/// Byte range of a state block within Trace::text.
struct StateBlockSpan {
  std::size_t offset = 0;
  std::size_t length = 0;
};

struct Trace {
  std::vector<TraceStep> steps;
  MoveSequence final_answer;
  std::string text;
  std::vector<StateBlockSpan> state_spans;
};

/// All four moves ordered by preference from `pos`: first the one or two
/// moves that reduce the distance to the goal (vertical before horizontal
/// when both apply), then the remaining moves in the fixed order
/// UP > DOWN > LEFT > RIGHT.
inline std::vector<Move> preferred_directions(const Map& m, Pos pos) {
  if (pos == m.goal) {
    throw std::invalid_argument("preferred_directions: already at goal");
  }
  std::vector<Move> order;
  order.reserve(4);
  if (pos.row > m.goal.row) {
    order.push_back(Move::Up);
  } else if (pos.row < m.goal.row) {
    order.push_back(Move::Down);
  }
  if (pos.col > m.goal.col) {
    order.push_back(Move::Left);
  } else if (pos.col < m.goal.col) {
    order.push_back(Move::Right);
  }
  const std::size_t direct = order.size();
  for (const Move mv : {Move::Up, Move::Down, Move::Left, Move::Right}) {
    bool taken = false;
    for (std::size_t i = 0; i < direct; ++i) taken = taken || order[i] == mv;
    if (!taken) order.push_back(mv);
  }
  return order;
}

/// Number of moves in `preferred_directions` that point toward the goal.
inline std::size_t direct_direction_count(const Map& m, Pos pos) {
  std::size_t n = 0;
  if (pos.row != m.goal.row) ++n;
  if (pos.col != m.goal.col) ++n;
  return n;
}

/// Narration for one step, from the state where the player stands at
/// `map_state.player`. The decided move always equals `next_move`; the
/// template is frozen so transcripts are byte-reproducible:
///
///   The direct path to the goal is moving {D1[ or D2]}. \n
///   [Moving {D} is blocked by a hole.\n]...
///   Thus, I will move {next_move}.
inline std::string narrate_step(const Map& map_state, Move next_move) {
  const Pos pos = map_state.player;
  const auto [target, outcome] = step(map_state, pos, next_move);
  if (outcome == StepOutcome::Hole) {
    throw InconsistentTarget("narrate_step: target move enters a hole");
  }
  if (outcome == StepOutcome::OffGrid) {
    throw InconsistentTarget("narrate_step: target move leaves the grid");
  }
  const auto order = preferred_directions(map_state, pos);
  const std::size_t direct = direct_direction_count(map_state, pos);

  std::string out = "The direct path to the goal is moving ";
  out += move_name(order[0]);
  if (direct == 2) {
    out += " or ";
    out += move_name(order[1]);
  }
  out += ". \n";
  for (std::size_t i = 0; i < direct; ++i) {
    const Pos adj = moved(pos, order[i]);
    if (map_state.in_bounds(adj) && map_state.is_hole(adj)) {
      out += "Moving ";
      out += move_name(order[i]);
      out += " is blocked by a hole.\n";
    }
  }
  out += "Thus, I will move ";
  out += move_name(next_move);
  out += ".";
  return out;
}

inline std::string final_answer_line(const MoveSequence& moves) {
  std::string out = "Final answer: \\boxed{";
  for (std::size_t i = 0; i < moves.size(); ++i) {
    if (i > 0) out += ", ";
    out += move_name(moves[i]);
  }
  out += "}";
  return out;
}

/// Builds the full chain-of-thought transcript for `path` on `map`.
///
/// Per step: Description carries the narration only; Grid/Table a
/// "Grid:"/"Table:" label plus the post-move state; the combined formats
/// narration then labeled state. Step blocks are separated by blank lines
/// and the transcript ends with the boxed final answer. `path` must solve
/// the map.
inline Trace synthesize_trace(const Map& map, const MoveSequence& path,
                              TraceFormat fmt) {
  if (!rollout(map, path).success) {
    throw std::invalid_argument("synthesize_trace: path does not solve the map");
  }
  Trace trace;
  trace.final_answer = path;
  if (fmt == TraceFormat::None) {
    trace.text = final_answer_line(path);
    return trace;
  }

  const bool wants_narration = trace_has_narration(fmt);
  const bool wants_state = trace_has_state_block(fmt);
  const bool uses_table =
      fmt == TraceFormat::Table || fmt == TraceFormat::TableDescription;
  const std::string_view label = uses_table ? "Table:\n" : "Grid:\n";

  Map state = map;
  for (const Move mv : path) {
    TraceStep step_out;
    step_out.move = mv;
    std::string block;
    if (wants_narration) {
      step_out.narration = narrate_step(state, mv);
      block += *step_out.narration;
      block += "\n";
    }
    const Pos next = moved(state.player, mv);
    if (wants_state) {
      step_out.state_block = uses_table ? render_table_state(state, next)
                                        : render_grid_state(state, next);
      block += label;
      const std::size_t offset = trace.text.size() + block.size();
      trace.state_spans.push_back({offset, step_out.state_block->size()});
      block += *step_out.state_block;
    } else {
      block.pop_back();  // no state: drop the newline after the narration
    }
    trace.text += block;
    trace.text += "\n\n";
    state.player = next;
    trace.steps.push_back(std::move(step_out));
  }
  trace.text += final_answer_line(path);
  return trace;
}

/// Sidecar metadata for a rendered trace: per-step moves plus byte ranges
/// of the state blocks, for verification tooling.
inline json trace_sidecar_json(const Trace& trace, TraceFormat fmt) {
  json j;
  j["format"] = std::string(trace_format_name(fmt));
  j["moves"] = moves_to_json(trace.final_answer);
  json spans = json::array();
  for (const auto& span : trace.state_spans) {
    spans.push_back({{"offset", span.offset}, {"length", span.length}});
  }
  j["state_blocks"] = std::move(spans);
  return j;
}

}  // namespace frozenlake
