#include "sudocrit/lp_relax.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sudocrit/simplex.hpp"

namespace sudocrit {

std::string_view row_family_name(RowFamily f) {
  switch (f) {
    case RowFamily::Cell: return "cell";
    case RowFamily::ColumnValue: return "column_value";
    case RowFamily::RowValue: return "row_value";
    case RowFamily::BlockValue: return "block_value";
    case RowFamily::Fixing: return "fixing";
  }
  return "unknown";
}

LpModel::LpModel(const BoardSpec& spec) : spec_(spec) {
  const int s = spec.side();
  auto add = [&](RowFamily family, auto&& var_at) {
    for (int a = 0; a < s; ++a) {
      for (int b = 0; b < s; ++b) {
        LpRow row{family, {}, 1.0};
        row.vars.reserve(static_cast<std::size_t>(s));
        for (int k = 0; k < s; ++k) row.vars.push_back(var_at(a, b, k));
        rows_.push_back(std::move(row));
      }
    }
  };
  // Cell (i, j): sum over values.
  add(RowFamily::Cell, [&](int i, int j, int k) { return var(i, j, k + 1); });
  // Column j, value v: sum over rows.
  add(RowFamily::ColumnValue, [&](int j, int v, int i) { return var(i, j, v + 1); });
  // Row i, value v: sum over columns.
  add(RowFamily::RowValue, [&](int i, int v, int j) { return var(i, j, v + 1); });
  if (spec.has_blocks()) {
    const int n = spec.box();
    add(RowFamily::BlockValue, [&](int blk, int v, int k) {
      const int i = (blk / n) * n + k / n;
      const int j = (blk % n) * n + k % n;
      return var(i, j, v + 1);
    });
  }
  structural_ = static_cast<int>(rows_.size());
}

void LpModel::add_fixing(int v) {
  if (v < 0 || v >= variable_count()) throw Error("fixing variable out of range");
  rows_.push_back(LpRow{RowFamily::Fixing, {v}, 1.0});
}

std::string LpModel::to_lp_format() const {
  const int s = spec_.side();
  auto name = [&](int v) {
    const int cell = cell_of(v);
    std::ostringstream os;
    os << 'x' << '_' << cell / s + 1 << '_' << cell % s + 1 << '_' << value_of(v);
    return os.str();
  };
  std::ostringstream out;
  out << "\\ board " << spec_.id() << ", " << variable_count() << " variables, "
      << rows_.size() << " equality rows\n";
  out << "Minimize\n obj: 0 " << name(0) << "\n";
  out << "Subject To\n";
  std::vector<int> family_index(5, 0);
  for (const auto& row : rows_) {
    const int idx = ++family_index[static_cast<int>(row.family)];
    out << ' ' << row_family_name(row.family) << '_' << idx << ':';
    for (std::size_t t = 0; t < row.vars.size(); ++t) {
      out << (t == 0 ? " " : " + ") << name(row.vars[t]);
    }
    out << " = " << row.rhs << '\n';
  }
  out << "Bounds\n";
  for (int v = 0; v < variable_count(); ++v) out << " 0 <= " << name(v) << " <= 1\n";
  out << "End\n";
  return out.str();
}

LpModel build_ilp(const Puzzle& puzzle) {
  const BoardSpec& spec = puzzle.spec();
  LpModel model(spec);
  const int s = spec.side();
  for (int cell = 0; cell < spec.cell_count(); ++cell) {
    if (!puzzle.is_clue(cell)) continue;
    model.add_fixing(model.var(cell / s, cell % s, puzzle.grid()[cell]));
  }
  return model;
}

double max_violation(const LpModel& model, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != model.variable_count()) {
    throw Error("point has the wrong number of coordinates");
  }
  double worst = 0.0;
  for (double v : x) worst = std::max({worst, -v, v - 1.0});
  for (const auto& row : model.rows()) {
    double sum = 0.0;
    for (int v : row.vars) sum += x[v];
    worst = std::max(worst, std::abs(sum - row.rhs));
  }
  return worst;
}

namespace {

constexpr double kFixTol = 1e-9;

// Variables whose value is forced by fixings and by rows that end up with a
// single free variable. Returns false if the forced values are inconsistent.
bool presolve(const LpModel& model, std::vector<double>& fixed, std::vector<bool>& is_fixed) {
  const int nv = model.variable_count();
  const auto& rows = model.rows();
  fixed.assign(static_cast<std::size_t>(nv), 0.0);
  is_fixed.assign(static_cast<std::size_t>(nv), false);
  std::vector<std::vector<int>> rows_of(static_cast<std::size_t>(nv));
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
    for (int v : rows[r].vars) rows_of[v].push_back(r);
  }
  std::vector<int> queue;
  auto fix = [&](int v, double value) {
    if (is_fixed[v]) return std::abs(fixed[v] - value) <= kFixTol;
    if (value < -kFixTol || value > 1.0 + kFixTol) return false;
    is_fixed[v] = true;
    fixed[v] = value;
    for (int r : rows_of[v]) queue.push_back(r);
    return true;
  };
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) queue.push_back(r);
  while (!queue.empty()) {
    const int r = queue.back();
    queue.pop_back();
    double rest = rows[r].rhs;
    int free_count = 0;
    int free_var = -1;
    for (int v : rows[r].vars) {
      if (is_fixed[v]) {
        rest -= fixed[v];
      } else {
        ++free_count;
        free_var = v;
      }
    }
    if (free_count == 0) {
      if (std::abs(rest) > kFixTol) return false;
    } else if (free_count == 1) {
      if (!fix(free_var, rest)) return false;
    } else if (std::abs(rest) <= kFixTol) {
      // Nonnegative variables summing to zero.
      for (int v : rows[r].vars) {
        if (!is_fixed[v] && !fix(v, 0.0)) return false;
      }
    } else if (rest < 0.0) {
      return false;
    }
  }
  return true;
}

}  // namespace

LpSolution solve_relaxation(const LpModel& model, const LpOptions& options) {
  if (!(options.residual_tol > 0.0)) throw Error("residual tolerance must be positive");
  const int nv = model.variable_count();
  LpSolution out;

  if (options.eliminate_fixings) {
    std::vector<double> fixed;
    std::vector<bool> is_fixed;
    if (!presolve(model, fixed, is_fixed)) return out;
    if (std::all_of(is_fixed.begin(), is_fixed.end(), [](bool b) { return b; })) {
      // The relaxation has exactly one feasible point, which any vertex
      // search would return as well.
      out.status = LpStatus::Feasible;
      out.values = std::move(fixed);
    }
    // Otherwise the full model is solved: the simplex on the reduced system
    // can stop at a different vertex, which would change the statistic.
  }

  if (out.status != LpStatus::Feasible) {
    std::vector<SparseRow> rows;
    rows.reserve(model.rows().size());
    for (const auto& row : model.rows()) {
      SparseRow sr;
      sr.rhs = row.rhs;
      for (int v : row.vars) sr.terms.emplace_back(v, 1.0);
      rows.push_back(std::move(sr));
    }
    const SimplexResult res = dense_simplex(nv, rows, {}, options.pricing);
    out.pivots = res.pivots;
    if (!res.feasible) return out;
    out.status = LpStatus::Feasible;
    out.values = res.x;
  }
  out.max_residual = max_violation(model, out.values);
  if (out.max_residual > options.residual_tol) {
    std::ostringstream msg;
    msg << "LP residual " << out.max_residual << " exceeds tolerance " << options.residual_tol;
    throw NumericalFailure(msg.str());
  }
  for (double x : out.values) {
    out.max_fractionality = std::max(out.max_fractionality, std::abs(x - std::round(x)));
  }
  return out;
}

bool is_integral(const LpSolution& solution, double tol) {
  if (solution.status != LpStatus::Feasible) throw Error("integrality of an infeasible LP");
  return solution.max_fractionality <= tol;
}

std::optional<Grid> decode_solution(const LpModel& model, const LpSolution& solution,
                                    double tol) {
  if (solution.status != LpStatus::Feasible) return std::nullopt;
  const int s = model.spec().side();
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(s * s), 0);
  for (int cell = 0; cell < s * s; ++cell) {
    for (int k = 0; k < s; ++k) {
      const double x = solution.values[static_cast<std::size_t>(cell * s + k)];
      if (std::abs(x - 1.0) <= tol) {
        if (cells[cell] != 0) return std::nullopt;
        cells[cell] = static_cast<std::uint8_t>(k + 1);
      } else if (std::abs(x) > tol) {
        return std::nullopt;
      }
    }
    if (cells[cell] == 0) return std::nullopt;
  }
  Grid grid(model.spec(), cells);
  if (!is_valid_complete(grid, *Topology::of(model.spec()))) return std::nullopt;
  return grid;
}

std::vector<double> encode_grid(const LpModel& model, const Grid& grid) {
  if (grid.spec() != model.spec()) throw Error("grid and model describe different boards");
  if (!grid.is_complete()) throw Error("only complete grids can be encoded");
  const int s = model.spec().side();
  std::vector<double> x(static_cast<std::size_t>(model.variable_count()), 0.0);
  for (int cell = 0; cell < s * s; ++cell) x[cell * s + grid[cell] - 1] = 1.0;
  return x;
}

}  // namespace sudocrit
