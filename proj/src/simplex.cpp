#include "sudocrit/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sudocrit {

namespace {

constexpr double kPivotEps = 1e-7;
constexpr double kRatioTie = 1e-9;
constexpr double kZero = 1e-12;
constexpr double kFeasTol = 1e-9;
// Consecutive degenerate pivots tolerated before switching to Bland.
constexpr int kStallLimit = 1000;
constexpr int kRefactorInterval = 400;

class Tableau {
 public:
  Tableau(int columns, std::span<const SparseRow> rows, PricingRule rule)
      : rule_(rule),
        m_(static_cast<int>(rows.size())),
        n_(columns),
        width_(columns + m_ + 1),
        t_(static_cast<std::size_t>(m_) * width_, 0.0),
        obj_(static_cast<std::size_t>(width_), 0.0),
        cost_(static_cast<std::size_t>(n_ + m_), 0.0),
        basis_(static_cast<std::size_t>(m_)),
        active_(static_cast<std::size_t>(m_), true) {
    for (int i = 0; i < m_; ++i) {
      const double sign = rows[i].rhs < 0.0 ? -1.0 : 1.0;
      for (const auto& [j, a] : rows[i].terms) {
        if (j < 0 || j >= n_) throw std::out_of_range("simplex column index");
        a_.push_back({i, j, sign * a});
      }
      b_.push_back(sign * rows[i].rhs);
      basis_[i] = n_ + i;
    }
    // The all-artificial basis is the identity, so the tableau is A | I | b.
    for (const auto& e : a_) at(e.row, e.col) += e.value;
    for (int i = 0; i < m_; ++i) {
      at(i, n_ + i) = 1.0;
      at(i, rhs_col()) = b_[i];
    }
  }

  // Phase one: minimize the sum of artificials. Returns false if infeasible.
  bool phase_one() {
    std::fill(cost_.begin(), cost_.end(), 0.0);
    std::fill(cost_.begin() + n_, cost_.end(), 1.0);
    reprice();
    iterate();
    return -obj_[rhs_col()] <= kFeasTol * std::max(1, m_);
  }

  // Pivots every artificial out of the basis, or retires its row.
  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int col = -1;
      for (int j = 0; j < n_; ++j) {
        if (std::abs(at(i, j)) > kPivotEps) {
          col = j;
          break;
        }
      }
      if (col < 0) {
        active_[i] = false;
        ++redundant_;
        continue;
      }
      pivot(i, col);
    }
  }

  void phase_two(std::span<const double> cost) {
    std::fill(cost_.begin(), cost_.end(), 0.0);
    std::copy(cost.begin(), cost.end(), cost_.begin());
    reprice();
    iterate();
  }

  std::vector<double> solution() {
    if (since_refactor_ > 0) refactor();
    std::vector<double> x(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = at(i, rhs_col());
    }
    return x;
  }

  int pivots() const { return pivots_; }
  int redundant() const { return redundant_; }

 private:
  struct Entry {
    int row;
    int col;
    double value;
  };

  int rhs_col() const { return width_ - 1; }
  double& at(int i, int j) { return t_[static_cast<std::size_t>(i) * width_ + j]; }

  // Reduced costs and objective value from cost_ and the current tableau.
  void reprice() {
    for (int j = 0; j < n_ + m_; ++j) obj_[j] = cost_[j];
    obj_[rhs_col()] = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (!active_[i]) continue;
      const double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &t_[static_cast<std::size_t>(i) * width_];
      for (int j = 0; j < width_; ++j) obj_[j] -= cb * row[j];
    }
    for (int i = 0; i < m_; ++i) obj_[basis_[i]] = 0.0;
  }

  // Rebuilds the tableau as B^-1 [A | I | b] from the original rows,
  // discarding the round-off accumulated by the pivots since the last call.
  void refactor() {
    const auto m = static_cast<std::size_t>(m_);
    std::vector<int> position(static_cast<std::size_t>(n_ + m_), -1);
    for (int i = 0; i < m_; ++i) position[basis_[i]] = i;
    // Gauss-Jordan on [B | I].
    std::vector<double> bm(m * m, 0.0);
    std::vector<double> inv(m * m, 0.0);
    for (const auto& e : a_) {
      if (position[e.col] >= 0) bm[e.row * m + position[e.col]] += e.value;
    }
    for (std::size_t k = 0; k < m; ++k) {
      if (position[n_ + k] >= 0) bm[k * m + position[n_ + k]] = 1.0;
      inv[k * m + k] = 1.0;
    }
    // bm is indexed (original row, basis position); we solve for B^-1 whose
    // rows are basis positions.
    std::vector<std::size_t> perm(m);
    for (std::size_t k = 0; k < m; ++k) perm[k] = k;
    for (std::size_t k = 0; k < m; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < m; ++i) {
        if (std::abs(bm[i * m + k]) > std::abs(bm[p * m + k])) p = i;
      }
      if (std::abs(bm[p * m + k]) < kZero) throw std::runtime_error("simplex: singular basis");
      if (p != k) {
        std::swap_ranges(bm.begin() + k * m, bm.begin() + (k + 1) * m, bm.begin() + p * m);
        std::swap_ranges(inv.begin() + k * m, inv.begin() + (k + 1) * m, inv.begin() + p * m);
      }
      const double d = 1.0 / bm[k * m + k];
      for (std::size_t j = 0; j < m; ++j) {
        bm[k * m + j] *= d;
        inv[k * m + j] *= d;
      }
      for (std::size_t i = 0; i < m; ++i) {
        if (i == k) continue;
        const double f = bm[i * m + k];
        if (f == 0.0) continue;
        for (std::size_t j = k; j < m; ++j) bm[i * m + j] -= f * bm[k * m + j];
        for (std::size_t j = 0; j < m; ++j) inv[i * m + j] -= f * inv[k * m + j];
      }
    }
    // After elimination, row k of `inv` is row k of B^-1, i.e. the basic
    // variable at position k.
    std::fill(t_.begin(), t_.end(), 0.0);
    for (const auto& e : a_) {
      for (std::size_t i = 0; i < m; ++i) {
        const double f = inv[i * m + e.row];
        if (f != 0.0) t_[i * width_ + e.col] += f * e.value;
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      double* row = &t_[i * width_];
      double rhs = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        row[n_ + k] = inv[i * m + k];
        rhs += inv[i * m + k] * b_[k];
      }
      row[rhs_col()] = rhs;
      for (int j = 0; j < width_; ++j) {
        if (std::abs(row[j]) < kZero) row[j] = 0.0;
      }
      if (row[rhs_col()] < 0.0 && row[rhs_col()] > -kFeasTol) row[rhs_col()] = 0.0;
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < m; ++k) t_[k * width_ + basis_[i]] = k == i ? 1.0 : 0.0;
    }
    reprice();
    since_refactor_ = 0;
  }

  void iterate() {
    int stall = 0;
    for (;;) {
      if (since_refactor_ >= kRefactorInterval) refactor();
      const bool bland = rule_ == PricingRule::Bland || stall > kStallLimit;
      int q = -1;
      double most = -kPivotEps;
      for (int j = 0; j < n_; ++j) {
        if (obj_[j] < most) {
          q = j;
          if (bland) break;
          most = obj_[j];
        }
      }
      if (q < 0) {
        // Confirm optimality on a freshly rebuilt tableau.
        if (since_refactor_ == 0) return;
        refactor();
        continue;
      }
      int r = -1;
      double best = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (!active_[i]) continue;
        const double a = at(i, q);
        if (a <= kPivotEps) continue;
        const double ratio = at(i, rhs_col()) / a;
        bool take = r < 0 || ratio < best - kRatioTie;
        if (!take && ratio <= best + kRatioTie) {
          const double ar = at(r, q);
          take = bland ? basis_[i] < basis_[r]
                       : a > ar + kRatioTie || (a >= ar - kRatioTie && basis_[i] < basis_[r]);
        }
        if (take) {
          r = i;
          best = ratio;
        }
      }
      if (r < 0) throw std::runtime_error("simplex: unbounded direction");
      stall = best <= kRatioTie ? stall + 1 : 0;
      pivot(r, q);
    }
  }

  void pivot(int r, int q) {
    ++pivots_;
    ++since_refactor_;
    const double inv = 1.0 / at(r, q);
    nz_.clear();
    for (int j = 0; j < width_; ++j) {
      double& v = at(r, j);
      if (v == 0.0) continue;
      v *= inv;
      if (std::abs(v) < kZero) {
        v = 0.0;
      } else {
        nz_.push_back(j);
      }
    }
    at(r, q) = 1.0;
    const double* prow = &t_[static_cast<std::size_t>(r) * width_];
    auto eliminate = [&](double* row) {
      const double f = row[q];
      if (f == 0.0) return;
      for (int j : nz_) {
        double v = row[j] - f * prow[j];
        row[j] = std::abs(v) < kZero ? 0.0 : v;
      }
      row[q] = 0.0;
    };
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &t_[static_cast<std::size_t>(i) * width_];
      eliminate(row);
      if (row[rhs_col()] < 0.0 && row[rhs_col()] > -kFeasTol) row[rhs_col()] = 0.0;
    }
    eliminate(obj_.data());
    basis_[r] = q;
  }

  PricingRule rule_;
  int m_;
  int n_;
  int width_;
  std::vector<double> t_;
  std::vector<double> obj_;
  std::vector<double> cost_;
  std::vector<int> basis_;
  std::vector<bool> active_;
  std::vector<int> nz_;
  std::vector<Entry> a_;
  std::vector<double> b_;
  int pivots_ = 0;
  int since_refactor_ = 0;
  int redundant_ = 0;
};

}  // namespace

SimplexResult dense_simplex(int columns, std::span<const SparseRow> rows,
                            std::span<const double> cost, PricingRule rule) {
  if (!cost.empty() && static_cast<int>(cost.size()) != columns) {
    throw std::invalid_argument("cost vector length does not match column count");
  }
  SimplexResult out;
  if (rows.empty()) {
    out.feasible = true;
    out.x.assign(static_cast<std::size_t>(columns), 0.0);
    if (!cost.empty()) {
      for (double c : cost) {
        if (c < 0.0) throw std::runtime_error("simplex: unbounded direction");
      }
    }
    return out;
  }
  Tableau tab(columns, rows, rule);
  const bool feasible = tab.phase_one();
  out.pivots = tab.pivots();
  if (!feasible) return out;
  tab.drive_out_artificials();
  tab.phase_two(cost);
  out.feasible = true;
  out.x = tab.solution();
  out.pivots = tab.pivots();
  out.redundant_rows = tab.redundant();
  return out;
}

}  // namespace sudocrit
