#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sudocrit/candidates.hpp"
#include "sudocrit/grid.hpp"

namespace sudocrit {

/// Human elimination strategies in escalation order (cheapest first).
enum class Strategy {
  NakedSingle,
  HiddenSingle,
  NakedPair,
  HiddenPair,
  PointingPairTriple,
  BoxLineReduction,
  Guess,
};

inline constexpr int kStrategyCount = 7;
inline constexpr std::array<Strategy, kStrategyCount> kAllStrategies = {
    Strategy::NakedSingle,        Strategy::HiddenSingle,     Strategy::NakedPair,
    Strategy::HiddenPair,         Strategy::PointingPairTriple, Strategy::BoxLineReduction,
    Strategy::Guess,
};

std::string_view strategy_name(Strategy s);

struct StrategyTrace {
  std::array<std::uint64_t, kStrategyCount> counts{};

  std::uint64_t count(Strategy s) const { return counts[static_cast<int>(s)]; }
  bool used(Strategy s) const { return count(s) > 0; }
  /// Number of distinct strategies applied at least once.
  int distinct_required() const;
  void record(Strategy s) { ++counts[static_cast<int>(s)]; }
};

struct StepOutcome {
  enum class Kind { Applied, Stuck, Contradiction };
  Kind kind = Kind::Stuck;
  /// Meaningful only when kind == Applied.
  Strategy strategy = Strategy::NakedSingle;
};

/// Applies the first strategy below Guess that changes the board.
///
/// The board must be in strategy form: every placement has already been
/// removed from its neighbors (see CandidateState::place). Block strategies
/// are skipped on boards without blocks.
StepOutcome apply_step(CandidateState& board);

/// Builds the strategy-form board for a puzzle; nullopt if the clues
/// already leave some cell without candidates.
std::optional<CandidateState> strategy_board(const Puzzle& puzzle);

struct StrategySolveResult {
  std::optional<Grid> solution;
  /// Every strategy application, including those on abandoned guess branches.
  StrategyTrace trace;
};

/// Elimination to fixpoint; when stuck, guesses a seeded value on a
/// minimum-candidate cell and backtracks chronologically.
StrategySolveResult strategy_solve(const Puzzle& puzzle, std::uint64_t seed);

struct StrategyProfile {
  std::size_t puzzles = 0;
  /// Fraction of puzzles whose trace used each strategy at least once.
  std::array<double, kStrategyCount> frequency{};
  /// Mean application count per puzzle.
  std::array<double, kStrategyCount> mean_count{};
  double distinct_mean = 0.0;
  /// Unbiased sample variance of distinct_required (0 for a single puzzle).
  double distinct_variance = 0.0;
  /// Mean over puzzles of naked singles per empty cell.
  double singles_per_empty = 0.0;
  /// Mean over puzzles of guesses per empty cell.
  double guesses_per_empty = 0.0;
};

/// Aggregates already computed traces. `empty_cells[i]` belongs to traces[i].
StrategyProfile profile_traces(std::span<const StrategyTrace> traces,
                               std::span<const int> empty_cells);

/// Solves every puzzle (instance t with seed derive_seed(seed, {t})) and
/// aggregates the traces. Throws on an unsatisfiable puzzle.
StrategyProfile strategy_profile(std::span<const Puzzle> puzzles, std::uint64_t seed);

}  // namespace sudocrit
