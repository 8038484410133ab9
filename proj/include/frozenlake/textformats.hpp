#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "frozenlake/core.hpp"

namespace frozenlake {

/// The four map representations fed to models.
enum class FormatKind { Image, Description, Table, Grid };

constexpr std::string_view format_name(FormatKind f) {
  switch (f) {
    case FormatKind::Image: return "image";
    case FormatKind::Description: return "description";
    case FormatKind::Table: return "table";
    case FormatKind::Grid: return "grid";
  }
  return "grid";
}

inline std::optional<FormatKind> format_from_name(std::string_view name) {
  if (name == "image") return FormatKind::Image;
  if (name == "description") return FormatKind::Description;
  if (name == "table") return FormatKind::Table;
  if (name == "grid") return FormatKind::Grid;
  return std::nullopt;
}

enum class ParseErrorKind {
  Malformed,
  MissingPlayer,
  MissingGoal,
  DuplicatePlayer,
  DuplicateGoal,
};

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ParseErrorKind kind() const { return kind_; }

 private:
  ParseErrorKind kind_;
};

/// A parsed board state. Unlike Map, the goal may be hidden: the final
/// state of a successful run renders the player on top of the goal cell.
struct GridState {
  int rows = 0;
  int cols = 0;
  std::vector<Pos> holes;
  Pos player;
  std::optional<Pos> goal;
};

namespace detail {

constexpr char kEmptySym = '.';
constexpr char kHoleSym = 'X';
constexpr char kPlayerSym = 'P';
constexpr char kGoalSym = 'G';

inline char cell_symbol(const Map& m, Pos at, Pos player) {
  if (at == player) return kPlayerSym;
  if (at == m.goal) return kGoalSym;
  if (m.is_hole(at)) return kHoleSym;
  return kEmptySym;
}

inline Map state_to_map(const GridState& s, const char* what) {
  if (!s.goal) {
    throw ParseError(ParseErrorKind::MissingGoal,
                     std::string(what) + ": no goal cell");
  }
  Map m;
  m.rows = s.rows;
  m.cols = s.cols;
  m.holes = s.holes;
  m.player = s.player;
  m.goal = *s.goal;
  validate_map(m);
  return m;
}

inline void place_symbol(GridState& s, char sym, Pos at, const char* what) {
  switch (sym) {
    case kEmptySym:
      break;
    case kHoleSym:
      s.holes.push_back(at);
      break;
    case kPlayerSym:
      if (s.player != Pos{-1, -1}) {
        throw ParseError(ParseErrorKind::DuplicatePlayer,
                         std::string(what) + ": more than one player");
      }
      s.player = at;
      break;
    case kGoalSym:
      if (s.goal) {
        throw ParseError(ParseErrorKind::DuplicateGoal,
                         std::string(what) + ": more than one goal");
      }
      s.goal = at;
      break;
    default:
      throw ParseError(ParseErrorKind::Malformed,
                       std::string(what) + ": unknown symbol '" +
                           std::string(1, sym) + "'");
  }
}

inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

}  // namespace detail

// --- grid ------------------------------------------------------------------
//
// One line per row; every cell is SPACE+symbol+SPACE, so a line is exactly
// 3*cols characters and the symbol of cell (r,c) sits at offset 3c+1.

/// Renders the board with the player drawn at `player` (covering the goal
/// when both coincide).
inline std::string render_grid_state(const Map& m, Pos player) {
  std::string out;
  out.reserve(static_cast<std::size_t>(m.rows) * (3 * m.cols + 1));
  for (int r = 0; r < m.rows; ++r) {
    if (r > 0) out.push_back('\n');
    for (int c = 0; c < m.cols; ++c) {
      out.push_back(' ');
      out.push_back(detail::cell_symbol(m, {r, c}, player));
      out.push_back(' ');
    }
  }
  return out;
}

inline std::string emit_grid(const Map& m) {
  return render_grid_state(m, m.player);
}

/// Lenient grid parse: accepts states where the goal is hidden under the
/// player. Rejects ragged rows, wrong spacing and unknown symbols.
inline GridState parse_grid_state(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || lines[0].empty()) {
    throw ParseError(ParseErrorKind::Malformed, "grid: empty input");
  }
  if (lines[0].size() % 3 != 0) {
    throw ParseError(ParseErrorKind::Malformed, "grid: wrong line length");
  }
  GridState s;
  s.rows = static_cast<int>(lines.size());
  s.cols = static_cast<int>(lines[0].size() / 3);
  s.player = {-1, -1};
  for (int r = 0; r < s.rows; ++r) {
    const std::string& line = lines[r];
    if (line.size() != static_cast<std::size_t>(3 * s.cols)) {
      throw ParseError(ParseErrorKind::Malformed, "grid: ragged rows");
    }
    for (int c = 0; c < s.cols; ++c) {
      if (line[3 * c] != ' ' || line[3 * c + 2] != ' ') {
        throw ParseError(ParseErrorKind::Malformed, "grid: wrong spacing");
      }
      detail::place_symbol(s, line[3 * c + 1], {r, c}, "grid");
    }
  }
  if (s.player == Pos{-1, -1}) {
    throw ParseError(ParseErrorKind::MissingPlayer, "grid: no player cell");
  }
  std::sort(s.holes.begin(), s.holes.end());
  return s;
}

/// Strict grid parse requiring exactly one player and one goal; the result
/// has no id or seed.
inline Map parse_grid(std::string_view text) {
  return detail::state_to_map(parse_grid_state(text), "grid");
}

// --- table -----------------------------------------------------------------
//
// Markdown-style pipe table: header row of column indices with an empty
// corner cell, a dash separator row, then one row per map row led by its
// row index. Cell contents share the grid symbols.

namespace detail {

inline int table_cell_width(int rows, int cols) {
  const int max_index = (rows > cols ? rows : cols) - 1;
  int digits = 1;
  for (int v = max_index; v >= 10; v /= 10) ++digits;
  return digits;
}

inline void append_table_cell(std::string& out, std::string_view content,
                              int width) {
  out.push_back(' ');
  out.append(content);
  for (int i = static_cast<int>(content.size()); i < width; ++i) {
    out.push_back(' ');
  }
  out.append(" |");
}

}  // namespace detail

inline std::string render_table_state(const Map& m, Pos player) {
  const int w = detail::table_cell_width(m.rows, m.cols);
  std::string out;
  out.push_back('|');
  detail::append_table_cell(out, std::string(static_cast<std::size_t>(w), ' '),
                            w);
  for (int c = 0; c < m.cols; ++c) {
    detail::append_table_cell(out, std::to_string(c), w);
  }
  out.push_back('\n');
  out.push_back('|');
  for (int c = 0; c <= m.cols; ++c) {
    out.append(std::string(static_cast<std::size_t>(w) + 2, '-'));
    out.push_back('|');
  }
  for (int r = 0; r < m.rows; ++r) {
    out.push_back('\n');
    out.push_back('|');
    detail::append_table_cell(out, std::to_string(r), w);
    for (int c = 0; c < m.cols; ++c) {
      const char sym = detail::cell_symbol(m, {r, c}, player);
      detail::append_table_cell(out, std::string_view(&sym, 1), w);
    }
  }
  return out;
}

inline std::string emit_table(const Map& m) {
  return render_table_state(m, m.player);
}

inline GridState parse_table_state(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.size() < 3) {
    throw ParseError(ParseErrorKind::Malformed, "table: too few rows");
  }
  auto split_cells = [](const std::string& line) {
    if (line.empty() || line.front() != '|' || line.back() != '|') {
      throw ParseError(ParseErrorKind::Malformed,
                       "table: rows must start and end with '|'");
    }
    std::vector<std::string> cells;
    std::size_t start = 1;
    while (start < line.size()) {
      const std::size_t end = line.find('|', start);
      if (end == std::string::npos) break;
      cells.emplace_back(line.substr(start, end - start));
      start = end + 1;
    }
    return cells;
  };

  const auto header = split_cells(lines[0]);
  if (header.size() < 2 || !detail::trim(header[0]).empty()) {
    throw ParseError(ParseErrorKind::Malformed,
                     "table: header must start with an empty corner cell");
  }
  const int cols = static_cast<int>(header.size()) - 1;
  for (int c = 0; c < cols; ++c) {
    if (detail::trim(header[c + 1]) != std::to_string(c)) {
      throw ParseError(ParseErrorKind::Malformed,
                       "table: bad column index in header");
    }
  }
  const auto separator = split_cells(lines[1]);
  if (separator.size() != header.size()) {
    throw ParseError(ParseErrorKind::Malformed, "table: ragged separator row");
  }
  for (const auto& cell : separator) {
    if (cell.empty() || cell.find_first_not_of('-') != std::string::npos) {
      throw ParseError(ParseErrorKind::Malformed,
                       "table: separator must be dashes");
    }
  }

  GridState s;
  s.rows = static_cast<int>(lines.size()) - 2;
  s.cols = cols;
  s.player = {-1, -1};
  for (int r = 0; r < s.rows; ++r) {
    const auto cells = split_cells(lines[r + 2]);
    if (cells.size() != header.size()) {
      throw ParseError(ParseErrorKind::Malformed, "table: ragged rows");
    }
    if (detail::trim(cells[0]) != std::to_string(r)) {
      throw ParseError(ParseErrorKind::Malformed, "table: bad row index");
    }
    for (int c = 0; c < s.cols; ++c) {
      const auto content = detail::trim(cells[c + 1]);
      if (content.size() != 1) {
        throw ParseError(ParseErrorKind::Malformed,
                         "table: cell must hold one symbol");
      }
      detail::place_symbol(s, content[0], {r, c}, "table");
    }
  }
  if (s.player == Pos{-1, -1}) {
    throw ParseError(ParseErrorKind::MissingPlayer, "table: no player cell");
  }
  std::sort(s.holes.begin(), s.holes.end());
  return s;
}

inline Map parse_table(std::string_view text) {
  return detail::state_to_map(parse_table_state(text), "table");
}

// --- description -----------------------------------------------------------

/// Fixed-template prose rendering: dimensions, coordinate conventions,
/// player and goal positions, then the holes sorted row-major (or
/// "Holes: none.").
inline std::string emit_description(const Map& m) {
  std::ostringstream out;
  out << "The map is a frozen lake with " << m.rows << " rows and " << m.cols
      << " columns.\n";
  out << "Rows are numbered 0 to " << m.rows - 1
      << " from top to bottom, and columns are numbered 0 to " << m.cols - 1
      << " from left to right.\n";
  out << "Every cell is either frozen ice, which is safe to step on, or a "
         "hole in the ice, which must be avoided.\n";
  out << "The player is at row " << m.player.row << ", column " << m.player.col
      << ".\n";
  out << "The goal is at row " << m.goal.row << ", column " << m.goal.col
      << ".\n";
  if (m.holes.empty()) {
    out << "Holes: none.";
  } else {
    out << "Holes: ";
    for (std::size_t i = 0; i < m.holes.size(); ++i) {
      if (i > 0) out << "; ";
      out << "row " << m.holes[i].row << ", column " << m.holes[i].col;
    }
    out << ".";
  }
  return out.str();
}

// --- raster image ----------------------------------------------------------

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

struct Palette {
  Rgb empty{220, 235, 245};
  Rgb hole{30, 60, 90};
  Rgb player{200, 40, 40};
  Rgb goal{240, 200, 40};
  Rgb gridline{90, 110, 125};
};

struct RenderConfig {
  int cell_px = 32;  // must be >= 4
  Palette palette;
  bool include_gridlines = false;
};

/// Flat-color raster of the map as a binary PPM (P6). Deterministic bytes
/// for equal inputs; rows*cell_px by cols*cell_px pixels.
inline std::string render_image(const Map& m, const RenderConfig& cfg = {}) {
  if (cfg.cell_px < 4) throw std::invalid_argument("cell_px must be >= 4");
  const int width = m.cols * cfg.cell_px;
  const int height = m.rows * cfg.cell_px;
  std::string out = "P6\n" + std::to_string(width) + " " +
                    std::to_string(height) + "\n255\n";
  out.reserve(out.size() + static_cast<std::size_t>(width) * height * 3);
  for (int y = 0; y < height; ++y) {
    const int r = y / cfg.cell_px;
    for (int x = 0; x < width; ++x) {
      const int c = x / cfg.cell_px;
      Rgb color;
      const char sym = detail::cell_symbol(m, {r, c}, m.player);
      switch (sym) {
        case detail::kHoleSym: color = cfg.palette.hole; break;
        case detail::kPlayerSym: color = cfg.palette.player; break;
        case detail::kGoalSym: color = cfg.palette.goal; break;
        default: color = cfg.palette.empty; break;
      }
      if (cfg.include_gridlines &&
          (x % cfg.cell_px == 0 || y % cfg.cell_px == 0)) {
        color = cfg.palette.gridline;
      }
      out.push_back(static_cast<char>(color.r));
      out.push_back(static_cast<char>(color.g));
      out.push_back(static_cast<char>(color.b));
    }
  }
  return out;
}

}  // namespace frozenlake
