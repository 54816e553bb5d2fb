#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sudocrit/exact_solver.hpp"
#include "sudocrit/grid.hpp"

namespace sudocrit {

/// Dense row-major square matrix.
class SquareMatrix {
 public:
  explicit SquareMatrix(int n, double fill = 0.0)
      : n_(n), data_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), fill) {}

  static SquareMatrix identity(int n, double scale = 1.0);

  int size() const { return n_; }
  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * n_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * n_ + c]; }

  /// Aᵀ A.
  SquareMatrix gram() const;

 private:
  int n_;
  std::vector<double> data_;
};

struct EnsembleMean {
  BoardSpec spec;
  SquareMatrix mean;
  std::size_t samples = 0;
};

/// Component-wise average of complete grids of one spec.
EnsembleMean mean_matrix(std::span<const Grid> grids);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.
std::vector<double> symmetric_eigenvalues(SquareMatrix a, double rel_tol = 1e-12);

/// sqrt of the eigenvalues of AᵀA, descending; tiny negative round-off is
/// clamped to zero.
std::vector<double> singular_values(const SquareMatrix& a);

/// -sum p ln p over p = sigma / sum(sigma), with 0 ln 0 = 0.
double shannon_entropy(std::span<const double> sigma);

struct SpectralSummary {
  std::vector<double> singular_values;
  std::vector<double> normalized;
  double entropy = 0.0;
};

SpectralSummary spectral_summary(const SquareMatrix& a);

/// Solves puzzle t with seed derive_seed(seed, {t}) and returns the entropy
/// of the mean of those solutions. Throws UnsatisfiableInput.
double ensemble_entropy(std::span<const Puzzle> puzzles, std::uint64_t seed,
                        const SolverConfig& base = {});

/// Entropy of the mean of `samples` independently seeded solutions of one
/// puzzle (sample s uses derive_seed(seed, {s})).
double solution_entropy(const Puzzle& puzzle, int samples, std::uint64_t seed,
                        const SolverConfig& base = {});

}  // namespace sudocrit
