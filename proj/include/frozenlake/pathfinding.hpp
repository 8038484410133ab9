#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "frozenlake/core.hpp"

namespace frozenlake {

struct PathResult {
  MoveSequence moves;
  int length = 0;  // always |moves|
};

enum class Heuristic { Manhattan, Chebyshev };

namespace detail {

constexpr std::array<Move, 4> kMoveOrder = {Move::Up, Move::Down, Move::Left,
                                            Move::Right};

inline int cell_index(const Map& m, Pos p) { return p.row * m.cols + p.col; }

inline std::vector<char> hole_mask(const Map& m) {
  std::vector<char> mask(static_cast<std::size_t>(m.rows) * m.cols, 0);
  for (const Pos& h : m.holes) mask[cell_index(m, h)] = 1;
  return mask;
}

inline int manhattan(Pos a, Pos b) {
  const int dr = a.row >= b.row ? a.row - b.row : b.row - a.row;
  const int dc = a.col >= b.col ? a.col - b.col : b.col - a.col;
  return dr + dc;
}

inline int heuristic_value(Heuristic h, Pos a, Pos b) {
  return h == Heuristic::Manhattan ? manhattan(a, b) : d_inf(a, b);
}

/// Expansion preference used to break f-cost ties: moves that reduce the
/// row distance to the goal come first, then moves that reduce the column
/// distance, then the rest in the fixed order UP > DOWN > LEFT > RIGHT.
inline int move_rank(Pos from, Pos goal, Move mv) {
  const Pos to = moved(from, mv);
  auto abs_delta = [](int a, int b) { return a >= b ? a - b : b - a; };
  if ((mv == Move::Up || mv == Move::Down) &&
      abs_delta(to.row, goal.row) < abs_delta(from.row, goal.row)) {
    return 0;
  }
  if ((mv == Move::Left || mv == Move::Right) &&
      abs_delta(to.col, goal.col) < abs_delta(from.col, goal.col)) {
    return 1;
  }
  return 2 + static_cast<int>(mv);
}

inline MoveSequence reconstruct(const Map& m, const std::vector<int>& parent,
                                const std::vector<Move>& via, Pos goal) {
  MoveSequence moves;
  int at = cell_index(m, goal);
  while (parent[at] >= 0) {
    moves.push_back(via[at]);
    at = parent[at];
  }
  std::reverse(moves.begin(), moves.end());
  return moves;
}

}  // namespace detail

/// Breadth-first shortest path over non-hole cells with 4-connectivity.
/// Returns nullopt when no hole-free path exists. Serves as the
/// independent oracle for astar_shortest.
inline std::optional<PathResult> bfs_shortest(const Map& m) {
  const auto holes = detail::hole_mask(m);
  const int n = m.rows * m.cols;
  std::vector<int> parent(n, -1);
  std::vector<char> seen(n, 0);
  std::vector<Move> via(n, Move::Up);

  std::deque<Pos> queue{m.player};
  seen[detail::cell_index(m, m.player)] = 1;
  while (!queue.empty()) {
    const Pos cur = queue.front();
    queue.pop_front();
    if (cur == m.goal) {
      MoveSequence moves = detail::reconstruct(m, parent, via, m.goal);
      const int len = static_cast<int>(moves.size());
      return PathResult{std::move(moves), len};
    }
    for (const Move mv : detail::kMoveOrder) {
      const Pos next = moved(cur, mv);
      if (!m.in_bounds(next)) continue;
      const int idx = detail::cell_index(m, next);
      if (seen[idx] || holes[idx]) continue;
      seen[idx] = 1;
      parent[idx] = detail::cell_index(m, cur);
      via[idx] = mv;
      queue.push_back(next);
    }
  }
  return std::nullopt;
}

/// A* with an admissible heuristic (Manhattan by default; Chebyshev also
/// admissible under 4-connectivity). Deterministic: equal-f candidates are
/// expanded by move preference (see detail::move_rank), then insertion
/// order, and a cell keeps the parent that first reached it at its final
/// cost. The returned path is therefore canonical and reproducible.
inline std::optional<PathResult> astar_shortest(
    const Map& m, Heuristic heuristic = Heuristic::Manhattan) {
  const auto holes = detail::hole_mask(m);
  const int n = m.rows * m.cols;
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> g(n, kInf);
  std::vector<int> parent(n, -1);
  std::vector<Move> via(n, Move::Up);
  std::vector<char> closed(n, 0);

  struct Node {
    int f;
    int rank;
    std::uint64_t seq;
    Pos pos;
  };
  auto later = [](const Node& a, const Node& b) {
    if (a.f != b.f) return a.f > b.f;
    if (a.rank != b.rank) return a.rank > b.rank;
    return a.seq > b.seq;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(later)> open(later);

  std::uint64_t seq = 0;
  g[detail::cell_index(m, m.player)] = 0;
  open.push({detail::heuristic_value(heuristic, m.player, m.goal), 0, seq++,
             m.player});

  while (!open.empty()) {
    const Node node = open.top();
    open.pop();
    const int idx = detail::cell_index(m, node.pos);
    if (closed[idx]) continue;
    closed[idx] = 1;
    if (node.pos == m.goal) {
      MoveSequence moves = detail::reconstruct(m, parent, via, m.goal);
      const int len = static_cast<int>(moves.size());
      return PathResult{std::move(moves), len};
    }
    const int g_cur = g[idx];
    for (const Move mv : detail::kMoveOrder) {
      const Pos next = moved(node.pos, mv);
      if (!m.in_bounds(next)) continue;
      const int nidx = detail::cell_index(m, next);
      if (holes[nidx] || closed[nidx]) continue;
      const int g_next = g_cur + 1;
      if (g_next >= g[nidx]) continue;  // first parent wins on ties
      g[nidx] = g_next;
      parent[nidx] = idx;
      via[nidx] = mv;
      open.push({g_next + detail::heuristic_value(heuristic, next, m.goal),
                 detail::move_rank(node.pos, m.goal, mv), seq++, next});
    }
  }
  return std::nullopt;
}

inline bool is_solvable(const Map& m) { return bfs_shortest(m).has_value(); }

}  // namespace frozenlake
