#include "sudocrit/grid.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <mutex>

namespace sudocrit {

namespace {

constexpr int kMaxSide = 32;

int side_for(Variant variant, int order) {
  return variant == Variant::Sudoku ? order * order : order;
}

}  // namespace

BoardSpec::BoardSpec(Variant variant, int order)
    : variant_(variant), order_(order), side_(0) {
  if (order < 2) {
    throw Error("board order must be at least 2, got " + std::to_string(order));
  }
  if (order > kMaxSide || side_for(variant, order) > kMaxSide) {
    throw Error("board side exceeds " + std::to_string(kMaxSide));
  }
  side_ = side_for(variant, order);
}

std::string BoardSpec::id() const {
  return std::string(variant_name(variant_)) + "-" + std::to_string(order_);
}

BoardSpec BoardSpec::from_id(std::string_view id) {
  auto dash = id.rfind('-');
  if (dash == std::string_view::npos) throw Error("bad spec id: " + std::string(id));
  int order = 0;
  auto digits = id.substr(dash + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), order);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw Error("bad spec id: " + std::string(id));
  }
  return {parse_variant(id.substr(0, dash)), order};
}

std::string_view variant_name(Variant v) {
  return v == Variant::Sudoku ? "sudoku" : "latin";
}

Variant parse_variant(std::string_view name) {
  if (name == "sudoku") return Variant::Sudoku;
  if (name == "latin" || name == "latin-square" || name == "pls") return Variant::LatinSquare;
  throw Error("unknown variant: " + std::string(name));
}

Topology::Topology(const BoardSpec& spec) : spec_(spec) {
  const int s = spec.side();
  const int cells = spec.cell_count();
  for (int r = 0; r < s; ++r) {
    std::vector<int> u;
    for (int c = 0; c < s; ++c) u.push_back(r * s + c);
    units_.push_back(std::move(u));
  }
  for (int c = 0; c < s; ++c) {
    std::vector<int> u;
    for (int r = 0; r < s; ++r) u.push_back(r * s + c);
    units_.push_back(std::move(u));
  }
  if (spec.has_blocks()) {
    const int n = spec.box();
    for (int br = 0; br < n; ++br) {
      for (int bc = 0; bc < n; ++bc) {
        std::vector<int> u;
        for (int r = br * n; r < (br + 1) * n; ++r) {
          for (int c = bc * n; c < (bc + 1) * n; ++c) u.push_back(r * s + c);
        }
        units_.push_back(std::move(u));
      }
    }
  }

  cell_units_.resize(cells);
  for (int u = 0; u < static_cast<int>(units_.size()); ++u) {
    for (int cell : units_[u]) cell_units_[cell].push_back(u);
  }

  neighbors_.resize(cells);
  for (int cell = 0; cell < cells; ++cell) {
    auto& nb = neighbors_[cell];
    for (int u : cell_units_[cell]) {
      for (int other : units_[u]) {
        if (other != cell) nb.push_back(other);
      }
    }
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
}

std::shared_ptr<const Topology> Topology::of(const BoardSpec& spec) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const Topology>> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_pair(static_cast<int>(spec.variant()), spec.order());
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_shared<const Topology>(spec)).first;
  }
  return it->second;
}

bool Topology::are_neighbors(int a, int b) const {
  const auto& nb = neighbors_[a];
  return std::binary_search(nb.begin(), nb.end(), b);
}

int Topology::block_of(int cell) const {
  if (!spec_.has_blocks()) return -1;
  const int n = spec_.box();
  return (row_of(cell) / n) * n + col_of(cell) / n;
}

Grid::Grid(const BoardSpec& spec)
    : spec_(spec), cells_(static_cast<std::size_t>(spec.cell_count()), 0) {}

Grid::Grid(const BoardSpec& spec, std::vector<std::uint8_t> cells)
    : spec_(spec), cells_(std::move(cells)) {
  if (static_cast<int>(cells_.size()) != spec.cell_count()) {
    throw LengthError("grid has " + std::to_string(cells_.size()) + " cells, expected " +
                      std::to_string(spec.cell_count()));
  }
  for (auto v : cells_) {
    if (v > spec.side()) {
      throw SymbolError("cell value " + std::to_string(v) + " outside 1.." +
                        std::to_string(spec.side()));
    }
  }
}

void Grid::set(int cell, int value) {
  if (value < 0 || value > side()) {
    throw SymbolError("cell value " + std::to_string(value) + " outside 1.." +
                      std::to_string(side()));
  }
  cells_[cell] = static_cast<std::uint8_t>(value);
}

int Grid::filled_count() const {
  return static_cast<int>(std::count_if(cells_.begin(), cells_.end(), [](auto v) { return v != 0; }));
}

Puzzle::Puzzle(Grid grid) : grid_(std::move(grid)) {
  const auto topo = Topology::of(grid_.spec());
  for (int cell = 0; cell < grid_.size(); ++cell) {
    if (grid_[cell] == 0) continue;
    for (int nb : topo->neighbors(cell)) {
      if (nb > cell && grid_[nb] == grid_[cell]) {
        throw ConflictError("clue " + std::to_string(grid_[cell]) + " repeated at cells " +
                            std::to_string(cell) + " and " + std::to_string(nb));
      }
    }
  }
}

namespace {

Grid masked(const Grid& solution, const std::vector<bool>& mask) {
  if (static_cast<int>(mask.size()) != solution.size()) {
    throw LengthError("clue mask length does not match grid");
  }
  Grid g(solution.spec());
  for (int cell = 0; cell < solution.size(); ++cell) {
    if (mask[cell]) {
      if (solution[cell] == 0) throw Error("clue mask selects an empty cell");
      g.set(cell, solution[cell]);
    }
  }
  return g;
}

}  // namespace

Puzzle::Puzzle(const Grid& solution, const std::vector<bool>& clue_mask)
    : Puzzle(masked(solution, clue_mask)) {}

std::vector<bool> Puzzle::clue_mask() const {
  std::vector<bool> mask(grid_.size());
  for (int cell = 0; cell < grid_.size(); ++cell) mask[cell] = grid_[cell] != 0;
  return mask;
}

Puzzle Puzzle::with_clue(int cell, int value) const {
  Grid g = grid_;
  g.set(cell, value);
  return Puzzle(std::move(g));
}

long long hamiltonian(const Grid& grid, const Topology& topology) {
  if (!grid.is_complete()) throw Error("hamiltonian requires a complete grid");
  long long energy = 0;
  for (int cell = 0; cell < grid.size(); ++cell) {
    for (int nb : topology.neighbors(cell)) {
      if (grid[nb] == grid[cell]) ++energy;
    }
  }
  return energy;
}

bool is_valid_complete(const Grid& grid, const Topology& topology) {
  return grid.is_complete() && hamiltonian(grid, topology) == 0;
}

bool is_conflict_free(const Grid& grid, const Topology& topology) {
  for (int cell = 0; cell < grid.size(); ++cell) {
    if (grid[cell] == 0) continue;
    for (int nb : topology.neighbors(cell)) {
      if (grid[nb] == grid[cell]) return false;
    }
  }
  return true;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::vector<std::uint8_t> parse_digits(std::string_view text, const BoardSpec& spec) {
  std::vector<std::uint8_t> cells;
  cells.reserve(spec.cell_count());
  for (char ch : text) {
    if (is_space(ch)) continue;
    int value = 0;
    if (ch == '.') {
      value = 0;
    } else if (ch >= '0' && ch <= '9') {
      value = ch - '0';
    } else {
      throw SymbolError(std::string("unexpected symbol '") + ch + "'");
    }
    if (value > spec.side()) {
      throw SymbolError("value " + std::to_string(value) + " outside 1.." +
                        std::to_string(spec.side()));
    }
    cells.push_back(static_cast<std::uint8_t>(value));
  }
  return cells;
}

std::vector<std::uint8_t> parse_integers(std::string_view text, const BoardSpec& spec) {
  std::vector<std::uint8_t> cells;
  cells.reserve(spec.cell_count());
  if (std::all_of(text.begin(), text.end(), is_space)) return cells;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    auto field = text.substr(pos, comma - pos);
    while (!field.empty() && is_space(field.front())) field.remove_prefix(1);
    while (!field.empty() && is_space(field.back())) field.remove_suffix(1);
    if (field.empty()) throw SymbolError("empty field at offset " + std::to_string(pos));
    int value = 0;
    if (field == ".") {
      value = 0;
    } else {
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw SymbolError("not an integer: '" + std::string(field) + "'");
      }
    }
    if (value < 0 || value > spec.side()) {
      throw SymbolError("value " + std::to_string(value) + " outside 1.." +
                        std::to_string(spec.side()));
    }
    cells.push_back(static_cast<std::uint8_t>(value));
    pos = comma + 1;
  }
  return cells;
}

}  // namespace

Puzzle parse_puzzle(std::string_view text, const BoardSpec& spec) {
  auto cells = spec.side() <= 9 ? parse_digits(text, spec) : parse_integers(text, spec);
  if (static_cast<int>(cells.size()) != spec.cell_count()) {
    throw LengthError("expected " + std::to_string(spec.cell_count()) + " cells, found " +
                      std::to_string(cells.size()));
  }
  return Puzzle(Grid(spec, std::move(cells)));
}

std::string serialize_grid(const Grid& grid) {
  std::string out;
  if (grid.side() <= 9) {
    out.reserve(grid.size());
    for (auto v : grid.cells()) out.push_back(v == 0 ? '.' : static_cast<char>('0' + v));
  } else {
    for (int cell = 0; cell < grid.size(); ++cell) {
      if (cell > 0) out.push_back(',');
      out += std::to_string(grid[cell]);
    }
  }
  return out;
}

std::string serialize_puzzle(const Puzzle& puzzle) { return serialize_grid(puzzle.grid()); }

ColoringInstance to_coloring(const Puzzle& puzzle, bool clique_gadget) {
  const auto topo = Topology::of(puzzle.spec());
  const int cells = topo->cell_count();
  const int k = topo->side();
  ColoringInstance out;
  out.vertex_count = cells;
  out.color_count = k;
  for (int a = 0; a < cells; ++a) {
    for (int b : topo->neighbors(a)) {
      if (b > a) out.edges.emplace_back(a, b);
    }
  }
  if (!clique_gadget) {
    for (int cell = 0; cell < cells; ++cell) {
      if (puzzle.is_clue(cell)) out.precolored.emplace_back(cell, puzzle.grid()[cell]);
    }
    return out;
  }
  out.vertex_count = cells + k;
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) out.edges.emplace_back(cells + a, cells + b);
  }
  for (int cell = 0; cell < cells; ++cell) {
    if (!puzzle.is_clue(cell)) continue;
    for (int color = 1; color <= k; ++color) {
      if (color != puzzle.grid()[cell]) out.edges.emplace_back(cell, cells + color - 1);
    }
  }
  return out;
}

}  // namespace sudocrit
