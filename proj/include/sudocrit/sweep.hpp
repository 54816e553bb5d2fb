#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sudocrit/exact_solver.hpp"
#include "sudocrit/grid.hpp"

namespace sudocrit {

enum class Metric { Hardness, Backbone, Lp, Entropy, Strategies };

std::string_view metric_name(Metric m);
Metric parse_metric(std::string_view name);

struct SweepConfig {
  BoardSpec spec = BoardSpec::sudoku(3);
  std::vector<int> clue_counts;
  int ensemble_size = 1000;
  std::uint64_t master_seed = 1;
  std::vector<Metric> metrics = {Metric::Hardness};
  /// Cap for the solution count recorded with the hardness metric; nullopt
  /// skips counting.
  std::optional<std::uint64_t> solution_cap = 2;
  /// Search settings for hardness and backbone probes (seed is replaced
  /// per instance).
  SolverConfig solver;
  /// Seeded solutions per puzzle for the solution_entropy rows.
  int entropy_samples = 50;
  /// Passed to the LP solver. Never changes the integrality verdict.
  bool lp_eliminate_fixings = true;
  /// When set and the entropy metric is on, the solved grids behind the
  /// entropy rows are written here, one "clue_count instance grid" line
  /// each, so other weightings can be recomputed later.
  std::filesystem::path solutions_out;
  /// Worker threads; 0 means hardware concurrency.
  int threads = 0;
  /// Called after each finished clue count with (done, total); may be empty.
  std::function<void(std::size_t, std::size_t)> progress;
};

/// A solver failed on a generated instance. This indicates a bug rather
/// than bad input.
class InstanceFailure : public Error {
 public:
  using Error::Error;
};

/// "20..50" (inclusive), "20..50:5" (with step) or "20,25,31" (list).
std::vector<int> parse_clue_counts(std::string_view text);

/// Throws Error when the configuration violates an invariant.
void validate(const SweepConfig& config);

/// One aggregated statistic: a CSV row.
struct SweepRow {
  std::string spec_id;
  int side = 0;
  Variant variant = Variant::Sudoku;
  int clue_count = 0;
  std::string metric;
  std::string statistic;
  double value = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t master_seed = 0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

/// Rows per clue count, in clue-count order:
///
///   hardness   backtracks, nodes {mean, variance};
///              solution_count {mean, variance}, unique_solution {mean}
///              (solution counts capped at solution_cap)
///   backbone   backbone_size, backbone_fraction {mean, variance}
///   lp         lp_integral {mean, variance}, lp_pivots {mean},
///              lp_max_residual {max}
///   entropy    entropy {value} for the ensemble of one solution per
///              puzzle; solution_entropy {mean, variance} over puzzles
///   strategies strategy_<name> {frequency, mean_count} for every
///              strategy; distinct_strategies {mean, variance};
///              singles_per_empty, guesses_per_empty {mean}
///
/// Variances are unbiased (0 for a single sample). Instance t uses the
/// seeds described in ensemble.hpp, so results do not depend on the
/// number of threads. A failure on any instance aborts the sweep with
/// InstanceFailure (NumericalFailure for LP residual violations).
std::vector<SweepRow> run_sweep(const SweepConfig& config);

inline constexpr std::string_view kCsvHeader =
    "spec_id,side,variant,clue_count,metric,statistic,value,n_samples,master_seed";

/// CSV text: a "# generated <UTC timestamp>" line, the header, then rows.
/// Values use the shortest representation that round-trips.
std::string format_csv(const std::vector<SweepRow>& rows, std::string_view timestamp);

/// Writes format_csv to `path` through a temporary file and a rename.
void write_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

class CsvError : public Error {
 public:
  using Error::Error;
};

std::vector<SweepRow> parse_csv(std::string_view text);
std::vector<SweepRow> read_csv(const std::filesystem::path& path);

enum class CriticalKind {
  /// Decided from the metric name: backbone_fraction, lp_integral and
  /// strategy_guess are sigmoidal, everything else peaked.
  Auto,
  Peak,
  Crossing,
};

/// Critical clue count of one metric/statistic series of one board.
///
/// Peak: the clue count of the largest value (the smallest such count on
/// ties). Crossing: the first point where the series crosses 0.5, linearly
/// interpolated between the neighbouring clue counts.
///
/// The selected rows must form an arithmetic progression of clue counts
/// with a positive step and no repeats; otherwise, or when the rows mix
/// boards or no crossing exists, throws Error.
double critical_point(const std::vector<SweepRow>& rows, std::string_view metric,
                      std::string_view statistic = "mean",
                      CriticalKind kind = CriticalKind::Auto);

/// Values of one metric/statistic series, ordered by clue count.
std::vector<std::pair<int, double>> series(const std::vector<SweepRow>& rows,
                                           std::string_view metric,
                                           std::string_view statistic = "mean");

}  // namespace sudocrit
