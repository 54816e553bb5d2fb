#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sudocrit/grid.hpp"
#include "sudocrit/simplex.hpp"

namespace sudocrit {

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

enum class RowFamily { Cell, ColumnValue, RowValue, BlockValue, Fixing };

std::string_view row_family_name(RowFamily f);

/// One equality constraint: the listed variables sum to `rhs`, each with
/// coefficient 1.
struct LpRow {
  RowFamily family = RowFamily::Cell;
  std::vector<int> vars;
  double rhs = 1.0;
};

/// Assignment polytope of a board: one variable per (row, column, value),
/// bounded to [0, 1], with one "exactly one" row per cell, per
/// column/value, per row/value and (for Sudoku) per block/value. Clues add
/// fixing rows x = 1.
class LpModel {
 public:
  explicit LpModel(const BoardSpec& spec);

  const BoardSpec& spec() const { return spec_; }
  int variable_count() const { return spec_.side() * spec_.side() * spec_.side(); }
  int structural_count() const { return structural_; }
  const std::vector<LpRow>& rows() const { return rows_; }

  /// Variable index of value `value` (1-based) at (row, col), row-major.
  int var(int row, int col, int value) const {
    return (row * spec_.side() + col) * spec_.side() + (value - 1);
  }
  int cell_of(int var) const { return var / spec_.side(); }
  int value_of(int var) const { return var % spec_.side() + 1; }

  void add_fixing(int var);

  /// CPLEX LP text (see docs/lp_format.md).
  std::string to_lp_format() const;

 private:
  BoardSpec spec_;
  std::vector<LpRow> rows_;
  int structural_ = 0;
};

LpModel build_ilp(const Puzzle& puzzle);

enum class LpStatus { Feasible, Infeasible };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> values;
  /// max |x - round(x)| over all variables.
  double max_fractionality = 0.0;
  /// Largest equality residual or bound violation on the full model.
  double max_residual = 0.0;
  int pivots = 0;
};

struct LpOptions {
  /// Post-solve residual limit; exceeding it throws NumericalFailure.
  double residual_tol = 1e-7;
  /// Substitute forced variables before running the simplex. Clue fixings,
  /// rows left with one free variable and rows whose remaining sum is zero
  /// are propagated to a fixpoint. When that determines every variable the
  /// point is returned directly (pivots = 0); otherwise the full model is
  /// solved so the reported vertex does not depend on this flag.
  bool eliminate_fixings = false;
  PricingRule pricing = PricingRule::DantzigBlandFallback;
};

/// Basic feasible point of the relaxation from the dense two-phase simplex.
/// The objective is zero, so the answer is the phase-one vertex. Upper
/// bounds are implied by the cell rows and nonnegativity, so only x >= 0 is
/// imposed explicitly.
LpSolution solve_relaxation(const LpModel& model, const LpOptions& options = {});

/// max_fractionality <= tol. Throws for an infeasible solution.
bool is_integral(const LpSolution& solution, double tol = 1e-6);

/// Grid read off an integral feasible point, or nullopt if some cell does
/// not have exactly one variable at 1.
std::optional<Grid> decode_solution(const LpModel& model, const LpSolution& solution,
                                    double tol = 1e-6);

/// 0/1 point of a complete grid.
std::vector<double> encode_grid(const LpModel& model, const Grid& grid);

/// Largest equality residual or bound violation of `x` on the model.
double max_violation(const LpModel& model, const std::vector<double>& x);

}  // namespace sudocrit
