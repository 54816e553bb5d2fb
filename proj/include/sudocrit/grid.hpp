#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sudocrit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed puzzle text or inconsistent clues.
class ParseError : public Error {
 public:
  using Error::Error;
};
class LengthError : public ParseError {
 public:
  using ParseError::ParseError;
};
class SymbolError : public ParseError {
 public:
  using ParseError::ParseError;
};
class ConflictError : public ParseError {
 public:
  using ParseError::ParseError;
};

enum class Variant { Sudoku, LatinSquare };

/// Candidate values of one cell; bit (v - 1) set means value v is allowed.
using ValueMask = std::uint32_t;

constexpr ValueMask value_bit(int value) { return ValueMask{1} << (value - 1); }
constexpr ValueMask full_mask(int side) {
  return side >= 32 ? ~ValueMask{0} : (ValueMask{1} << side) - 1;
}
inline int mask_size(ValueMask m) { return std::popcount(m); }
inline int lowest_value(ValueMask m) { return std::countr_zero(m) + 1; }

/// Board geometry. For Sudoku the order is the box size n (side n*n);
/// for a Latin square the order is the side itself.
class BoardSpec {
 public:
  BoardSpec(Variant variant, int order);

  static BoardSpec sudoku(int box) { return {Variant::Sudoku, box}; }
  static BoardSpec latin_square(int side) { return {Variant::LatinSquare, side}; }

  Variant variant() const { return variant_; }
  int order() const { return order_; }
  int side() const { return side_; }
  int cell_count() const { return side_ * side_; }
  bool has_blocks() const { return variant_ == Variant::Sudoku; }
  /// Block edge length; only meaningful for Sudoku.
  int box() const { return variant_ == Variant::Sudoku ? order_ : 0; }

  /// Stable identifier such as "sudoku-3" or "latin-9".
  std::string id() const;
  /// Inverse of id().
  static BoardSpec from_id(std::string_view id);

  friend bool operator==(const BoardSpec&, const BoardSpec&) = default;

 private:
  Variant variant_;
  int order_;
  int side_;
};

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);

/// Rows, columns and (for Sudoku) blocks, plus the neighborhood of every cell.
/// Units are ordered rows, then columns, then blocks; blocks row-major.
class Topology {
 public:
  explicit Topology(const BoardSpec& spec);

  /// Shared, lazily built instance per spec.
  static std::shared_ptr<const Topology> of(const BoardSpec& spec);

  const BoardSpec& spec() const { return spec_; }
  int side() const { return spec_.side(); }
  int cell_count() const { return spec_.cell_count(); }

  const std::vector<std::vector<int>>& units() const { return units_; }
  std::span<const int> unit(int u) const { return units_[u]; }
  std::span<const int> units_of(int cell) const { return cell_units_[cell]; }
  std::span<const int> neighbors(int cell) const { return neighbors_[cell]; }
  bool are_neighbors(int a, int b) const;

  int row_of(int cell) const { return cell / side(); }
  int col_of(int cell) const { return cell % side(); }
  /// Block index of a cell, or -1 without blocks.
  int block_of(int cell) const;
  int row_unit(int row) const { return row; }
  int col_unit(int col) const { return side() + col; }
  int block_unit(int block) const { return 2 * side() + block; }
  bool is_row_unit(int u) const { return u < side(); }
  bool is_col_unit(int u) const { return u >= side() && u < 2 * side(); }
  bool is_block_unit(int u) const { return u >= 2 * side(); }

 private:
  BoardSpec spec_;
  std::vector<std::vector<int>> units_;
  std::vector<std::vector<int>> cell_units_;
  std::vector<std::vector<int>> neighbors_;
};

/// A (possibly partial) assignment; 0 marks an empty cell.
class Grid {
 public:
  explicit Grid(const BoardSpec& spec);
  Grid(const BoardSpec& spec, std::vector<std::uint8_t> cells);

  const BoardSpec& spec() const { return spec_; }
  int side() const { return spec_.side(); }
  int size() const { return static_cast<int>(cells_.size()); }

  int operator[](int cell) const { return cells_[cell]; }
  int at(int row, int col) const { return cells_[row * side() + col]; }
  void set(int cell, int value);
  std::span<const std::uint8_t> cells() const { return cells_; }

  int filled_count() const;
  bool is_complete() const { return filled_count() == size(); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  BoardSpec spec_;
  std::vector<std::uint8_t> cells_;
};

/// A grid whose nonzero cells are the clues. Clues never conflict.
class Puzzle {
 public:
  /// Every nonzero cell of `grid` becomes a clue. Throws ConflictError.
  explicit Puzzle(Grid grid);
  /// Keeps only the cells selected by `clue_mask`.
  Puzzle(const Grid& solution, const std::vector<bool>& clue_mask);

  const Grid& grid() const { return grid_; }
  const BoardSpec& spec() const { return grid_.spec(); }
  bool is_clue(int cell) const { return grid_[cell] != 0; }
  std::vector<bool> clue_mask() const;
  int clue_count() const { return grid_.filled_count(); }
  int empty_count() const { return grid_.size() - clue_count(); }

  /// Copy of this puzzle with one more clue. Throws ConflictError.
  Puzzle with_clue(int cell, int value) const;

  friend bool operator==(const Puzzle&, const Puzzle&) = default;

 private:
  Grid grid_;
};

/// Sum over cells i and neighbors j of [v_i == v_j]; each conflicting
/// unordered pair is counted twice. Requires a complete grid.
long long hamiltonian(const Grid& grid, const Topology& topology);

bool is_valid_complete(const Grid& grid, const Topology& topology);

/// True when no two filled neighbors share a value.
bool is_conflict_free(const Grid& grid, const Topology& topology);

Puzzle parse_puzzle(std::string_view text, const BoardSpec& spec);
std::string serialize_puzzle(const Puzzle& puzzle);
std::string serialize_grid(const Grid& grid);

struct ColoringInstance {
  int vertex_count = 0;
  int color_count = 0;
  std::vector<std::pair<int, int>> edges;
  /// (vertex, color) for every precolored vertex.
  std::vector<std::pair<int, int>> precolored;
};

/// Cells become vertices and neighbor pairs become edges. With
/// `clique_gadget` the clues are encoded structurally instead: an extra
/// k-clique is appended (vertex cell_count + c - 1 stands for color c) and
/// each clue cell is linked to every clique vertex except its own color.
ColoringInstance to_coloring(const Puzzle& puzzle, bool clique_gadget = false);

}  // namespace sudocrit
