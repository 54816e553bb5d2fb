#include "sudocrit/strategy_solver.hpp"

#include <array>
#include <stdexcept>

#include "sudocrit/random.hpp"

namespace sudocrit {

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::NakedSingle: return "naked_single";
    case Strategy::HiddenSingle: return "hidden_single";
    case Strategy::NakedPair: return "naked_pair";
    case Strategy::HiddenPair: return "hidden_pair";
    case Strategy::PointingPairTriple: return "pointing_pair_triple";
    case Strategy::BoxLineReduction: return "box_line_reduction";
    case Strategy::Guess: return "guess";
  }
  return "unknown";
}

int StrategyTrace::distinct_required() const {
  int n = 0;
  for (auto c : counts) n += c > 0 ? 1 : 0;
  return n;
}

namespace {

using Kind = StepOutcome::Kind;

constexpr StepOutcome applied(Strategy s) { return {Kind::Applied, s}; }
constexpr StepOutcome stuck() { return {Kind::Stuck, Strategy::NakedSingle}; }
constexpr StepOutcome contradiction() { return {Kind::Contradiction, Strategy::NakedSingle}; }

// Unassigned cells of a unit holding `value` as a candidate.
int cells_with(const CandidateState& b, std::span<const int> unit, int value,
               std::array<int, 32>& out) {
  const ValueMask bit = value_bit(value);
  int n = 0;
  for (int cell : unit) {
    if (!b.is_assigned(cell) && (b.candidates(cell) & bit)) out[n++] = cell;
  }
  return n;
}

ValueMask placed_in(const CandidateState& b, std::span<const int> unit) {
  ValueMask m = 0;
  for (int cell : unit) {
    if (b.is_assigned(cell)) m |= value_bit(b.value(cell));
  }
  return m;
}

std::optional<StepOutcome> naked_single(CandidateState& b) {
  for (int cell = 0; cell < b.cell_count(); ++cell) {
    if (b.is_assigned(cell)) continue;
    const ValueMask m = b.candidates(cell);
    if (m == 0) return contradiction();
    if ((m & (m - 1)) == 0) {
      return b.place(cell, lowest_value(m)) ? applied(Strategy::NakedSingle) : contradiction();
    }
  }
  return std::nullopt;
}

std::optional<StepOutcome> hidden_single(CandidateState& b) {
  const auto& topo = b.topology();
  std::array<int, 32> cells{};
  for (const auto& unit : topo.units()) {
    const ValueMask placed = placed_in(b, unit);
    for (int v = 1; v <= b.side(); ++v) {
      if (placed & value_bit(v)) continue;
      const int n = cells_with(b, unit, v, cells);
      if (n == 0) return contradiction();
      if (n == 1) {
        return b.place(cells[0], v) ? applied(Strategy::HiddenSingle) : contradiction();
      }
    }
  }
  return std::nullopt;
}

std::optional<StepOutcome> naked_pair(CandidateState& b) {
  const auto& topo = b.topology();
  for (const auto& unit : topo.units()) {
    const int len = static_cast<int>(unit.size());
    for (int i = 0; i < len; ++i) {
      const int a = unit[i];
      const ValueMask pair = b.candidates(a);
      if (b.is_assigned(a) || mask_size(pair) != 2) continue;
      for (int j = i + 1; j < len; ++j) {
        const int c = unit[j];
        if (b.is_assigned(c) || b.candidates(c) != pair) continue;
        bool changed = false;
        for (int other : unit) {
          if (other == a || other == c || b.is_assigned(other)) continue;
          if (b.candidates(other) & pair) {
            changed = true;
            if (!b.restrict_to(other, ~pair)) return contradiction();
          }
        }
        if (changed) return applied(Strategy::NakedPair);
      }
    }
  }
  return std::nullopt;
}

std::optional<StepOutcome> hidden_pair(CandidateState& b) {
  const auto& topo = b.topology();
  std::array<int, 32> first{};
  std::array<int, 32> second{};
  for (const auto& unit : topo.units()) {
    const ValueMask placed = placed_in(b, unit);
    for (int v = 1; v <= b.side(); ++v) {
      if ((placed & value_bit(v)) || cells_with(b, unit, v, first) != 2) continue;
      for (int w = v + 1; w <= b.side(); ++w) {
        if (placed & value_bit(w)) continue;
        if (cells_with(b, unit, w, second) != 2) continue;
        if (first[0] != second[0] || first[1] != second[1]) continue;
        const ValueMask pair = value_bit(v) | value_bit(w);
        if (b.candidates(first[0]) == pair && b.candidates(first[1]) == pair) continue;
        b.restrict_to(first[0], pair);
        b.restrict_to(first[1], pair);
        return applied(Strategy::HiddenPair);
      }
    }
  }
  return std::nullopt;
}

// Strikes `value` from every unassigned cell of `unit` outside `keep_unit`.
// Returns -1 on contradiction, otherwise the number of strikes.
int strike_outside(CandidateState& b, std::span<const int> unit, int keep_unit, int value) {
  const auto& topo = b.topology();
  const ValueMask bit = value_bit(value);
  int struck = 0;
  for (int cell : unit) {
    if (b.is_assigned(cell) || !(b.candidates(cell) & bit)) continue;
    const auto owners = topo.units_of(cell);
    bool inside = false;
    for (int u : owners) inside = inside || u == keep_unit;
    if (inside) continue;
    ++struck;
    if (!b.remove(cell, value)) return -1;
  }
  return struck;
}

std::optional<StepOutcome> pointing(CandidateState& b) {
  const auto& topo = b.topology();
  std::array<int, 32> cells{};
  const int side = b.side();
  for (int block = 0; block < side; ++block) {
    const int bu = topo.block_unit(block);
    const auto unit = topo.unit(bu);
    const ValueMask placed = placed_in(b, unit);
    for (int v = 1; v <= side; ++v) {
      if (placed & value_bit(v)) continue;
      const int n = cells_with(b, unit, v, cells);
      if (n == 0) return contradiction();
      bool same_row = true;
      bool same_col = true;
      for (int k = 1; k < n; ++k) {
        same_row = same_row && topo.row_of(cells[k]) == topo.row_of(cells[0]);
        same_col = same_col && topo.col_of(cells[k]) == topo.col_of(cells[0]);
      }
      for (int line : {same_row ? topo.row_unit(topo.row_of(cells[0])) : -1,
                       same_col ? topo.col_unit(topo.col_of(cells[0])) : -1}) {
        if (line < 0) continue;
        const int struck = strike_outside(b, topo.unit(line), bu, v);
        if (struck < 0) return contradiction();
        if (struck > 0) return applied(Strategy::PointingPairTriple);
      }
    }
  }
  return std::nullopt;
}

std::optional<StepOutcome> box_line(CandidateState& b) {
  const auto& topo = b.topology();
  std::array<int, 32> cells{};
  const int side = b.side();
  for (int line = 0; line < 2 * side; ++line) {
    const auto unit = topo.unit(line);
    const ValueMask placed = placed_in(b, unit);
    for (int v = 1; v <= side; ++v) {
      if (placed & value_bit(v)) continue;
      const int n = cells_with(b, unit, v, cells);
      if (n == 0) return contradiction();
      const int block = topo.block_of(cells[0]);
      bool same_block = true;
      for (int k = 1; k < n; ++k) same_block = same_block && topo.block_of(cells[k]) == block;
      if (!same_block) continue;
      const int struck = strike_outside(b, topo.unit(topo.block_unit(block)), line, v);
      if (struck < 0) return contradiction();
      if (struck > 0) return applied(Strategy::BoxLineReduction);
    }
  }
  return std::nullopt;
}

class GuessSearch {
 public:
  explicit GuessSearch(std::uint64_t seed) : rng_(seed) {}

  bool solve(CandidateState board) {
    for (;;) {
      if (board.is_complete()) {
        solution_ = board.to_grid();
        return true;
      }
      const auto out = apply_step(board);
      if (out.kind == Kind::Contradiction) return false;
      if (out.kind == Kind::Stuck) break;
      trace_.record(out.strategy);
    }
    int cell = -1;
    int best = 64;
    for (int c = 0; c < board.cell_count(); ++c) {
      if (board.is_assigned(c)) continue;
      const int n = mask_size(board.candidates(c));
      if (n < best) {
        best = n;
        cell = c;
      }
    }
    std::array<int, 32> order{};
    int count = 0;
    for (ValueMask m = board.candidates(cell); m != 0; m &= m - 1) order[count++] = lowest_value(m);
    rng_.shuffle(std::span<int>(order.data(), static_cast<std::size_t>(count)));
    for (int i = 0; i < count; ++i) {
      CandidateState child = board;
      trace_.record(Strategy::Guess);
      if (child.place(cell, order[i]) && solve(std::move(child))) return true;
    }
    return false;
  }

  std::optional<Grid>& solution() { return solution_; }
  const StrategyTrace& trace() const { return trace_; }

 private:
  Rng rng_;
  StrategyTrace trace_;
  std::optional<Grid> solution_;
};

}  // namespace

StepOutcome apply_step(CandidateState& board) {
  if (auto r = naked_single(board)) return *r;
  if (auto r = hidden_single(board)) return *r;
  if (auto r = naked_pair(board)) return *r;
  if (auto r = hidden_pair(board)) return *r;
  if (board.topology().spec().has_blocks()) {
    if (auto r = pointing(board)) return *r;
    if (auto r = box_line(board)) return *r;
  }
  return stuck();
}

std::optional<CandidateState> strategy_board(const Puzzle& puzzle) {
  CandidateState board(Topology::of(puzzle.spec()));
  const auto& g = puzzle.grid();
  for (int cell = 0; cell < g.size(); ++cell) {
    if (g[cell] != 0 && !board.place(cell, g[cell])) return std::nullopt;
  }
  return board;
}

StrategySolveResult strategy_solve(const Puzzle& puzzle, std::uint64_t seed) {
  auto board = strategy_board(puzzle);
  if (!board) return {};
  GuessSearch search(seed);
  search.solve(std::move(*board));
  return {std::move(search.solution()), search.trace()};
}

StrategyProfile profile_traces(std::span<const StrategyTrace> traces,
                               std::span<const int> empty_cells) {
  if (traces.empty()) throw Error("strategy profile needs at least one puzzle");
  if (traces.size() != empty_cells.size()) throw Error("trace and empty-cell counts differ");
  StrategyProfile p;
  p.puzzles = traces.size();
  const double n = static_cast<double>(traces.size());
  double distinct_sum = 0.0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& t = traces[i];
    for (int s = 0; s < kStrategyCount; ++s) {
      p.frequency[s] += t.counts[s] > 0 ? 1.0 : 0.0;
      p.mean_count[s] += static_cast<double>(t.counts[s]);
    }
    distinct_sum += t.distinct_required();
    if (empty_cells[i] > 0) {
      p.singles_per_empty += static_cast<double>(t.count(Strategy::NakedSingle)) / empty_cells[i];
      p.guesses_per_empty += static_cast<double>(t.count(Strategy::Guess)) / empty_cells[i];
    }
  }
  for (int s = 0; s < kStrategyCount; ++s) {
    p.frequency[s] /= n;
    p.mean_count[s] /= n;
  }
  p.singles_per_empty /= n;
  p.guesses_per_empty /= n;
  p.distinct_mean = distinct_sum / n;
  if (traces.size() > 1) {
    double ss = 0.0;
    for (const auto& t : traces) {
      const double d = t.distinct_required() - p.distinct_mean;
      ss += d * d;
    }
    p.distinct_variance = ss / (n - 1.0);
  }
  return p;
}

StrategyProfile strategy_profile(std::span<const Puzzle> puzzles, std::uint64_t seed) {
  std::vector<StrategyTrace> traces;
  std::vector<int> empties;
  traces.reserve(puzzles.size());
  for (std::size_t t = 0; t < puzzles.size(); ++t) {
    auto r = strategy_solve(puzzles[t], derive_seed(seed, {t}));
    if (!r.solution) throw Error("puzzle " + std::to_string(t) + " is unsatisfiable");
    traces.push_back(r.trace);
    empties.push_back(puzzles[t].empty_count());
  }
  return profile_traces(traces, empties);
}

}  // namespace sudocrit
