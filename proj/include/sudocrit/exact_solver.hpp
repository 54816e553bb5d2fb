#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sudocrit/candidates.hpp"
#include "sudocrit/grid.hpp"

namespace sudocrit {

enum class ValueOrder { Ascending, SeededShuffle };
enum class CellOrder { FirstEmpty, MinimumCandidates };

struct SolverConfig {
  std::uint64_t seed = 0;
  ValueOrder value_order = ValueOrder::SeededShuffle;
  CellOrder cell_order = CellOrder::MinimumCandidates;
  PropagationLevel propagation = PropagationLevel::AllDifferent;
  /// Stop enumerating after this many solutions; nullopt means unlimited.
  std::optional<std::uint64_t> solution_cap;
};

/// Search instrumentation. A backtrack is the retraction of one branching
/// assignment, whether its subtree failed or was exhausted during
/// enumeration. Assignments forced by propagation are not counted. `nodes`
/// counts the root plus every branching assignment.
struct SearchStats {
  std::uint64_t backtracks = 0;
  std::uint64_t nodes = 0;
  std::uint64_t solutions_found = 0;

  friend bool operator==(const SearchStats&, const SearchStats&) = default;
};

struct SolveResult {
  std::optional<Grid> solution;
  SearchStats stats;

  bool satisfiable() const { return solution.has_value(); }
};

struct CountResult {
  /// Exact when below the cap, otherwise equal to the cap.
  std::uint64_t count = 0;
  bool capped = false;
  SearchStats stats;
};

/// First solution found by backtracking over the configured propagation.
/// An unsatisfiable puzzle yields an empty `solution`.
SolveResult solve_one(const Puzzle& puzzle, const SolverConfig& config = {});

/// Same search started from an arbitrary candidate state.
SolveResult solve_from(CandidateState state, const SolverConfig& config = {});

CountResult count_solutions(const Puzzle& puzzle, std::uint64_t cap,
                            const SolverConfig& config = {});

/// Solutions in search order, at most `cap` of them.
std::vector<Grid> enumerate_solutions(const Puzzle& puzzle, std::uint64_t cap,
                                      const SolverConfig& config = {});

/// Solves the blank board with a shuffled value order.
Grid random_complete_grid(const BoardSpec& spec, std::uint64_t seed);

/// Keeps a uniformly random subset of `clue_count` cells of a complete grid.
/// For a fixed seed the clue sets of increasing counts are nested.
Puzzle puncture(const Grid& grid, int clue_count, std::uint64_t seed);

}  // namespace sudocrit
