#pragma once

#include <span>
#include <utility>
#include <vector>

namespace sudocrit {

struct SparseRow {
  std::vector<std::pair<int, double>> terms;
  double rhs = 0.0;
};

struct SimplexResult {
  bool feasible = false;
  /// Basic solution over the structural columns (empty when infeasible).
  std::vector<double> x;
  int pivots = 0;
  /// Rows found linearly dependent on the others.
  int redundant_rows = 0;
};

enum class PricingRule {
  /// Smallest-index entering column and smallest basic index on ratio ties.
  Bland,
  /// Most negative reduced cost (lowest index on ties), ratio ties broken
  /// toward the largest pivot element. After a run of degenerate pivots
  /// the iteration switches to Bland's rule until the objective moves again,
  /// which rules out cycling.
  DantzigBlandFallback,
};

/// Minimizes cost·x subject to A x = b, x >= 0 with a dense two-phase
/// tableau. An empty `cost` means the zero objective. Basic values are
/// recomputed from the original rows at the end. The result is a
/// deterministic function of the input.
SimplexResult dense_simplex(int columns, std::span<const SparseRow> rows,
                            std::span<const double> cost = {},
                            PricingRule rule = PricingRule::DantzigBlandFallback);

}  // namespace sudocrit
