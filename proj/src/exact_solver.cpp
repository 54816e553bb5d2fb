#include "sudocrit/exact_solver.hpp"

#include <array>
#include <numeric>

#include "sudocrit/random.hpp"

namespace sudocrit {

namespace {

class Search {
 public:
  enum class Mode { FirstSolution, Enumerate };

  Search(const SolverConfig& config, Mode mode, bool keep_solutions)
      : config_(config), mode_(mode), keep_(keep_solutions), rng_(config.seed) {}

  void run(CandidateState root) {
    stats_.nodes = 1;
    if (root.propagate(config_.propagation) == Propagation::Contradiction) return;
    stack_.reserve(static_cast<std::size_t>(root.cell_count()) + 2);
    stack_.push_back(std::move(root));
    dfs(0);
  }

  const SearchStats& stats() const { return stats_; }
  std::vector<Grid>& solutions() { return solutions_; }
  std::optional<Grid>& first() { return first_; }
  std::uint64_t found() const { return stats_.solutions_found; }
  bool capped() const { return capped_; }

 private:
  int choose_cell(const CandidateState& st) const {
    const int cells = st.cell_count();
    if (config_.cell_order == CellOrder::FirstEmpty) {
      for (int c = 0; c < cells; ++c) {
        if (!st.is_assigned(c)) return c;
      }
      return -1;
    }
    int best = -1;
    int best_size = 64;
    for (int c = 0; c < cells; ++c) {
      if (st.is_assigned(c)) continue;
      const int n = mask_size(st.candidates(c));
      if (n < best_size) {
        best = c;
        best_size = n;
        if (n <= 2) break;
      }
    }
    return best;
  }

  // Returns true when the search must stop.
  bool on_solution(const CandidateState& st) {
    ++stats_.solutions_found;
    if (mode_ == Mode::FirstSolution) {
      first_ = st.to_grid();
      return true;
    }
    if (keep_) solutions_.push_back(st.to_grid());
    if (config_.solution_cap && stats_.solutions_found >= *config_.solution_cap) {
      capped_ = true;
      return true;
    }
    return false;
  }

  bool dfs(std::size_t depth) {
    if (stack_[depth].is_complete()) return on_solution(stack_[depth]);
    const int cell = choose_cell(stack_[depth]);
    std::array<int, 32> order{};
    int count = 0;
    for (ValueMask m = stack_[depth].candidates(cell); m != 0; m &= m - 1) {
      order[count++] = lowest_value(m);
    }
    if (config_.value_order == ValueOrder::SeededShuffle) {
      rng_.shuffle(std::span<int>(order.data(), static_cast<std::size_t>(count)));
    }
    if (stack_.size() <= depth + 1) stack_.push_back(stack_[depth]);
    for (int i = 0; i < count; ++i) {
      stack_[depth + 1] = stack_[depth];
      ++stats_.nodes;
      CandidateState& child = stack_[depth + 1];
      if (child.assign(cell, order[i]) && child.propagate(config_.propagation) == Propagation::Stable) {
        if (dfs(depth + 1)) return true;
      }
      ++stats_.backtracks;
    }
    return false;
  }

  SolverConfig config_;
  Mode mode_;
  bool keep_;
  Rng rng_;
  SearchStats stats_;
  std::vector<CandidateState> stack_;
  std::vector<Grid> solutions_;
  std::optional<Grid> first_;
  bool capped_ = false;
};

}  // namespace

SolveResult solve_from(CandidateState state, const SolverConfig& config) {
  Search search(config, Search::Mode::FirstSolution, false);
  search.run(std::move(state));
  return {std::move(search.first()), search.stats()};
}

SolveResult solve_one(const Puzzle& puzzle, const SolverConfig& config) {
  return solve_from(CandidateState(puzzle), config);
}

CountResult count_solutions(const Puzzle& puzzle, std::uint64_t cap, const SolverConfig& config) {
  if (cap == 0) throw Error("solution cap must be at least 1");
  SolverConfig cfg = config;
  cfg.solution_cap = cap;
  Search search(cfg, Search::Mode::Enumerate, false);
  search.run(CandidateState(puzzle));
  return {search.found(), search.capped(), search.stats()};
}

std::vector<Grid> enumerate_solutions(const Puzzle& puzzle, std::uint64_t cap,
                                      const SolverConfig& config) {
  if (cap == 0) throw Error("solution cap must be at least 1");
  SolverConfig cfg = config;
  cfg.solution_cap = cap;
  Search search(cfg, Search::Mode::Enumerate, true);
  search.run(CandidateState(puzzle));
  return std::move(search.solutions());
}

Grid random_complete_grid(const BoardSpec& spec, std::uint64_t seed) {
  SolverConfig cfg;
  cfg.seed = seed;
  cfg.value_order = ValueOrder::SeededShuffle;
  cfg.cell_order = CellOrder::MinimumCandidates;
  auto result = solve_one(Puzzle(Grid(spec)), cfg);
  if (!result.solution) throw Error("blank board reported unsatisfiable");
  return std::move(*result.solution);
}

Puzzle puncture(const Grid& grid, int clue_count, std::uint64_t seed) {
  const int cells = grid.size();
  if (clue_count < 0 || clue_count > cells) {
    throw Error("clue count " + std::to_string(clue_count) + " outside 0.." +
                std::to_string(cells));
  }
  if (!grid.is_complete()) throw Error("puncture requires a complete grid");
  std::vector<int> order(static_cast<std::size_t>(cells));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (int i = 0; i < clue_count; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(cells - i)));
    std::swap(order[i], order[j]);
  }
  std::vector<bool> mask(static_cast<std::size_t>(cells), false);
  for (int i = 0; i < clue_count; ++i) mask[order[i]] = true;
  return Puzzle(grid, mask);
}

}  // namespace sudocrit
