#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace frozenlake {

/// Grid coordinate. Row 0 is the top line of every rendering, column 0 the
/// leftmost; ordering is row-major.
struct Pos {
  int row = 0;
  int col = 0;
  auto operator<=>(const Pos&) const = default;
};

enum class Move { Up, Down, Left, Right };

using MoveSequence = std::vector<Move>;

constexpr std::string_view move_name(Move m) {
  switch (m) {
    case Move::Up: return "UP";
    case Move::Down: return "DOWN";
    case Move::Left: return "LEFT";
    case Move::Right: return "RIGHT";
  }
  return "UP";
}

/// Case-insensitive move-name lookup.
inline std::optional<Move> move_from_name(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "UP") return Move::Up;
  if (upper == "DOWN") return Move::Down;
  if (upper == "LEFT") return Move::Left;
  if (upper == "RIGHT") return Move::Right;
  return std::nullopt;
}

/// UP decrements row, DOWN increments row, LEFT decrements col, RIGHT
/// increments col.
constexpr Pos moved(Pos p, Move m) {
  switch (m) {
    case Move::Up: return {p.row - 1, p.col};
    case Move::Down: return {p.row + 1, p.col};
    case Move::Left: return {p.row, p.col - 1};
    case Move::Right: return {p.row, p.col + 1};
  }
  return p;
}

/// A frozen-lake instance: immutable once built.
struct Map {
  int rows = 0;
  int cols = 0;
  std::vector<Pos> holes;  // sorted row-major, no duplicates
  Pos player;
  Pos goal;
  std::string id;
  std::optional<std::uint64_t> seed;

  bool in_bounds(Pos p) const {
    return p.row >= 0 && p.row < rows && p.col >= 0 && p.col < cols;
  }

  bool is_hole(Pos p) const {
    return std::binary_search(holes.begin(), holes.end(), p);
  }

  /// Structural equality over the board (id/seed excluded).
  bool same_board(const Map& other) const {
    return rows == other.rows && cols == other.cols && holes == other.holes &&
           player == other.player && goal == other.goal;
  }
};

constexpr int kMinMapSize = 2;
constexpr int kMaxMapSize = 64;

/// Normalizes the hole list (sort + dedupe) and checks every invariant;
/// throws std::invalid_argument on violation.
inline void validate_map(Map& m) {
  if (m.rows < kMinMapSize || m.rows > kMaxMapSize || m.cols < kMinMapSize ||
      m.cols > kMaxMapSize) {
    throw std::invalid_argument("map dimensions out of range");
  }
  std::sort(m.holes.begin(), m.holes.end());
  if (std::adjacent_find(m.holes.begin(), m.holes.end()) != m.holes.end()) {
    throw std::invalid_argument("duplicate hole");
  }
  for (const Pos& h : m.holes) {
    if (!m.in_bounds(h)) throw std::invalid_argument("hole out of bounds");
  }
  if (!m.in_bounds(m.player) || !m.in_bounds(m.goal)) {
    throw std::invalid_argument("player or goal out of bounds");
  }
  if (m.player == m.goal) throw std::invalid_argument("player equals goal");
  if (m.is_hole(m.player)) throw std::invalid_argument("player on a hole");
  if (m.is_hole(m.goal)) throw std::invalid_argument("goal on a hole");
}

inline Map make_map(int rows, int cols, std::vector<Pos> holes, Pos player,
                    Pos goal, std::string id = {},
                    std::optional<std::uint64_t> seed = std::nullopt) {
  Map m{rows, cols, std::move(holes), player, goal, std::move(id), seed};
  validate_map(m);
  return m;
}

enum class StepOutcome { Ok, Hole, OffGrid };

/// One move in the environment. Off-grid moves leave the player in place;
/// a hole outcome reports the hole's position. Total and side-effect free.
inline std::pair<Pos, StepOutcome> step(const Map& m, Pos pos, Move mv) {
  const Pos target = moved(pos, mv);
  if (!m.in_bounds(target)) return {pos, StepOutcome::OffGrid};
  if (m.is_hole(target)) return {target, StepOutcome::Hole};
  return {target, StepOutcome::Ok};
}

struct RolloutResult {
  bool success = false;
  Pos end_pos;
  bool fell_in_hole = false;
  std::optional<Pos> hole_pos;
  int off_grid_moves = 0;
  int steps_executed = 0;
  bool truncated = false;
};

inline int default_step_cap(const Map& m) { return 4 * m.rows * m.cols; }

/// Replays `moves` from the map's start position. Stops early when a hole
/// is entered or `step_cap` moves have been executed (truncation is a
/// failure). Success means no hole was entered and the position after the
/// last executed move is the goal; passing over the goal and leaving it
/// does not count.
inline RolloutResult rollout(const Map& m, const MoveSequence& moves,
                             int step_cap) {
  RolloutResult r;
  Pos pos = m.player;
  for (const Move mv : moves) {
    if (r.steps_executed >= step_cap) {
      r.truncated = true;
      break;
    }
    ++r.steps_executed;
    const auto [next, outcome] = step(m, pos, mv);
    pos = next;
    if (outcome == StepOutcome::OffGrid) {
      ++r.off_grid_moves;
    } else if (outcome == StepOutcome::Hole) {
      r.fell_in_hole = true;
      r.hole_pos = next;
      break;
    }
  }
  r.end_pos = pos;
  r.success = !r.fell_in_hole && !r.truncated && pos == m.goal;
  return r;
}

inline RolloutResult rollout(const Map& m, const MoveSequence& moves) {
  return rollout(m, moves, default_step_cap(m));
}

/// Chebyshev distance: max of absolute row and column differences.
constexpr int d_inf(Pos a, Pos b) {
  const int dr = a.row >= b.row ? a.row - b.row : b.row - a.row;
  const int dc = a.col >= b.col ? a.col - b.col : b.col - a.col;
  return dr >= dc ? dr : dc;
}

// --- canonical map JSON ----------------------------------------------------
//
// {"id": str, "rows": int, "cols": int, "holes": [[r,c],...] sorted
//  row-major, "player": [r,c], "goal": [r,c], "seed": int|null}

using json = nlohmann::ordered_json;

inline json map_to_json(const Map& m) {
  json j;
  j["id"] = m.id;
  j["rows"] = m.rows;
  j["cols"] = m.cols;
  json holes = json::array();
  for (const Pos& h : m.holes) holes.push_back({h.row, h.col});
  j["holes"] = std::move(holes);
  j["player"] = {m.player.row, m.player.col};
  j["goal"] = {m.goal.row, m.goal.col};
  if (m.seed) {
    j["seed"] = *m.seed;
  } else {
    j["seed"] = nullptr;
  }
  return j;
}

inline Map map_from_json(const json& j) {
  auto pos_of = [](const json& a) -> Pos {
    if (!a.is_array() || a.size() != 2) {
      throw std::invalid_argument("position must be a [row, col] pair");
    }
    return {a[0].get<int>(), a[1].get<int>()};
  };
  Map m;
  m.id = j.value("id", std::string{});
  m.rows = j.at("rows").get<int>();
  m.cols = j.at("cols").get<int>();
  for (const auto& h : j.at("holes")) m.holes.push_back(pos_of(h));
  m.player = pos_of(j.at("player"));
  m.goal = pos_of(j.at("goal"));
  if (j.contains("seed") && !j.at("seed").is_null()) {
    m.seed = j.at("seed").get<std::uint64_t>();
  }
  validate_map(m);
  return m;
}

inline MoveSequence moves_from_json(const json& j) {
  MoveSequence out;
  for (const auto& name : j) {
    auto mv = move_from_name(name.get<std::string>());
    if (!mv) throw std::invalid_argument("unknown move name");
    out.push_back(*mv);
  }
  return out;
}

inline json moves_to_json(const MoveSequence& moves) {
  json j = json::array();
  for (Move m : moves) j.push_back(std::string(move_name(m)));
  return j;
}

}  // namespace frozenlake
