#include "sudocrit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "sudocrit/backbone.hpp"
#include "sudocrit/random.hpp"

namespace sudocrit {

SquareMatrix SquareMatrix::identity(int n, double scale) {
  SquareMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = scale;
  return m;
}

SquareMatrix SquareMatrix::gram() const {
  SquareMatrix g(n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) {
      double s = 0.0;
      for (int k = 0; k < n_; ++k) s += (*this)(k, i) * (*this)(k, j);
      g(i, j) = s;
      g(j, i) = s;
    }
  }
  return g;
}

EnsembleMean mean_matrix(std::span<const Grid> grids) {
  if (grids.empty()) throw Error("mean of an empty ensemble");
  const BoardSpec spec = grids.front().spec();
  const int s = spec.side();
  // Integer sums are exact; the single division happens last.
  std::vector<std::uint64_t> sums(static_cast<std::size_t>(s) * s, 0);
  for (const auto& g : grids) {
    if (!(g.spec() == spec)) throw Error("ensemble mixes board specs");
    if (!g.is_complete()) throw Error("ensemble contains an incomplete grid");
    for (int cell = 0; cell < g.size(); ++cell) sums[cell] += g[cell];
  }
  EnsembleMean out{spec, SquareMatrix(s), grids.size()};
  const double n = static_cast<double>(grids.size());
  for (int r = 0; r < s; ++r) {
    for (int c = 0; c < s; ++c) out.mean(r, c) = static_cast<double>(sums[r * s + c]) / n;
  }
  return out;
}

std::vector<double> symmetric_eigenvalues(SquareMatrix a, double rel_tol) {
  const int n = a.size();
  auto off_norm = [&] {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) s += a(i, j) * a(i, j);
      }
    }
    return std::sqrt(s);
  };
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) total += a(i, j) * a(i, j);
  }
  const double threshold = rel_tol * std::sqrt(total);
  for (int sweep = 0; sweep < 100 && off_norm() > threshold; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

std::vector<double> singular_values(const SquareMatrix& a) {
  auto eig = symmetric_eigenvalues(a.gram());
  for (auto& e : eig) e = std::sqrt(std::max(e, 0.0));
  return eig;
}

double shannon_entropy(std::span<const double> sigma) {
  double total = 0.0;
  for (double s : sigma) {
    if (s < 0.0 || !std::isfinite(s)) throw Error("singular values must be finite and nonnegative");
    total += s;
  }
  if (total <= 0.0) throw Error("entropy of an all-zero spectrum");
  double h = 0.0;
  for (double s : sigma) {
    if (s > 0.0) {
      const double p = s / total;
      h -= p * std::log(p);
    }
  }
  return std::max(h, 0.0);
}

SpectralSummary spectral_summary(const SquareMatrix& a) {
  SpectralSummary out;
  out.singular_values = singular_values(a);
  double total = 0.0;
  for (double s : out.singular_values) total += s;
  for (double s : out.singular_values) out.normalized.push_back(total > 0.0 ? s / total : 0.0);
  out.entropy = shannon_entropy(out.singular_values);
  return out;
}

double ensemble_entropy(std::span<const Puzzle> puzzles, std::uint64_t seed,
                        const SolverConfig& base) {
  std::vector<Grid> solutions;
  solutions.reserve(puzzles.size());
  for (std::size_t t = 0; t < puzzles.size(); ++t) {
    SolverConfig cfg = base;
    cfg.seed = derive_seed(seed, {t});
    auto r = solve_one(puzzles[t], cfg);
    if (!r.solution) throw UnsatisfiableInput("puzzle " + std::to_string(t) + " has no solution");
    solutions.push_back(std::move(*r.solution));
  }
  return shannon_entropy(singular_values(mean_matrix(solutions).mean));
}

double solution_entropy(const Puzzle& puzzle, int samples, std::uint64_t seed,
                        const SolverConfig& base) {
  if (samples < 1) throw Error("solution entropy needs at least one sample");
  std::vector<Grid> solutions;
  solutions.reserve(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    SolverConfig cfg = base;
    cfg.seed = derive_seed(seed, {static_cast<std::uint64_t>(s)});
    auto r = solve_one(puzzle, cfg);
    if (!r.solution) throw UnsatisfiableInput("puzzle has no solution");
    solutions.push_back(std::move(*r.solution));
  }
  return shannon_entropy(singular_values(mean_matrix(solutions).mean));
}

}  // namespace sudocrit
