#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "closed_form.hpp"
#include "sudocrit/exact_solver.hpp"
#include "sudocrit/spectral.hpp"

using namespace sudocrit;

namespace {

SquareMatrix random_matrix(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  SquareMatrix a(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = u(rng);
  }
  return a;
}

SquareMatrix as_matrix(const Grid& g) {
  const int s = g.spec().side();
  SquareMatrix a(s);
  for (int r = 0; r < s; ++r) {
    for (int c = 0; c < s; ++c) a(r, c) = g.at(r, c);
  }
  return a;
}

}  // namespace

TEST_CASE("singular value examples") {
  auto sv = singular_values(SquareMatrix(5, 2.0));
  CHECK(sv[0] == doctest::Approx(10.0).epsilon(1e-12));
  for (int i = 1; i < 5; ++i) CHECK(std::abs(sv[i]) < 1e-6);
  sv = singular_values(SquareMatrix::identity(4, 3.0));
  for (double s : sv) CHECK(s == doctest::Approx(3.0).epsilon(1e-12));
  SquareMatrix d(2);
  d(0, 0) = 3;
  d(1, 1) = 4;
  sv = singular_values(d);
  CHECK(sv[0] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(sv[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("singular values match the characteristic polynomial (property)") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + trial % 2;
    const auto a = random_matrix(n, rng);
    const auto got = singular_values(a);
    const auto expect = closed_form::singular_values(a);
    REQUIRE(got.size() == expect.size());
    for (int i = 0; i < n; ++i) CHECK(std::abs(got[i] - expect[i]) <= 1e-8 * (1 + expect[0]));
    CHECK(std::is_sorted(got.rbegin(), got.rend()));
  }
}

TEST_CASE("row permutation leaves the spectrum alone (property)") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 8;
    const auto a = random_matrix(n, rng);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    SquareMatrix pa(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) pa(i, j) = a(perm[i], j);
    }
    const auto s1 = singular_values(a);
    const auto s2 = singular_values(pa);
    for (int i = 0; i < n; ++i) CHECK(std::abs(s1[i] - s2[i]) <= 1e-9 * (1 + s1[0]));
    CHECK(shannon_entropy(s1) == doctest::Approx(shannon_entropy(s2)).epsilon(1e-10));
  }
}

TEST_CASE("symmetric eigenvalues") {
  SquareMatrix a(3);
  a(0, 0) = 2;
  a(0, 1) = a(1, 0) = 1;
  a(1, 1) = 2;
  a(2, 2) = 5;
  const auto ev = symmetric_eigenvalues(a);
  CHECK(ev[0] == doctest::Approx(5.0));
  CHECK(ev[1] == doctest::Approx(3.0));
  CHECK(ev[2] == doctest::Approx(1.0));
}

TEST_CASE("shannon entropy") {
  const std::vector<double> rank1 = {7.0, 0.0, 0.0, 0.0};
  CHECK(shannon_entropy(rank1) == 0.0);
  const std::vector<double> uniform(9, 1.0);
  CHECK(shannon_entropy(uniform) == doctest::Approx(std::log(9.0)).epsilon(1e-12));
  CHECK(shannon_entropy(uniform) == doctest::Approx(2.19722).epsilon(1e-5));
  const std::vector<double> pair = {1.0, 1.0, 0.0};
  CHECK(shannon_entropy(pair) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  const std::vector<double> zeros(3, 0.0);
  CHECK_THROWS_AS(shannon_entropy(zeros), Error);
  const std::vector<double> negative = {1.0, -0.5};
  CHECK_THROWS_AS(shannon_entropy(negative), Error);

  SUBCASE("scale invariance and bounds (property)") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<double> s(1 + trial % 12);
      for (double& x : s) x = u(rng);
      const double h = shannon_entropy(s);
      CHECK(h >= 0.0);
      CHECK(h <= std::log(static_cast<double>(s.size())) + 1e-12);
      for (double c : {1e-3, 0.5, 17.0, 1e6}) {
        std::vector<double> scaled = s;
        for (double& x : scaled) x *= c;
        CHECK(shannon_entropy(scaled) == doctest::Approx(h).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("spectral summary") {
  const auto s = spectral_summary(SquareMatrix::identity(4, 2.0));
  double total = 0;
  for (double x : s.normalized) total += x;
  CHECK(total == doctest::Approx(1.0));
  CHECK(s.entropy == doctest::Approx(std::log(4.0)));
}

TEST_CASE("mean matrix") {
  const auto s3 = BoardSpec::sudoku(3);
  const Grid g = random_complete_grid(s3, 1);
  SUBCASE("single grid and copies") {
    for (int copies : {1, 3, 10}) {
      const std::vector<Grid> grids(static_cast<std::size_t>(copies), g);
      const auto m = mean_matrix(grids);
      CHECK(m.samples == static_cast<std::size_t>(copies));
      for (int r = 0; r < 9; ++r) {
        for (int c = 0; c < 9; ++c) CHECK(m.mean(r, c) == g.at(r, c));
      }
    }
  }
  SUBCASE("grid and complement") {
    Grid h = g;
    for (int cell = 0; cell < 81; ++cell) h.set(cell, 10 - g[cell]);
    const std::vector<Grid> grids = {g, h};
    const auto m = mean_matrix(grids);
    for (int r = 0; r < 9; ++r) {
      for (int c = 0; c < 9; ++c) CHECK(m.mean(r, c) == 5.0);
    }
    CHECK(shannon_entropy(singular_values(m.mean)) == doctest::Approx(0.0).epsilon(1e-6));
  }
  SUBCASE("entries within value range (property)") {
    std::vector<Grid> grids;
    for (std::uint64_t seed = 0; seed < 25; ++seed) grids.push_back(random_complete_grid(s3, seed));
    const auto m = mean_matrix(grids);
    for (int r = 0; r < 9; ++r) {
      for (int c = 0; c < 9; ++c) {
        CHECK(m.mean(r, c) >= 1.0);
        CHECK(m.mean(r, c) <= 9.0);
      }
    }
    const double h = shannon_entropy(singular_values(m.mean));
    CHECK(h >= 0.0);
    CHECK(h <= std::log(9.0));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(mean_matrix(std::vector<Grid>{}), Error);
    const std::vector<Grid> mixed = {g, random_complete_grid(BoardSpec::latin_square(9), 1)};
    CHECK_THROWS_AS(mean_matrix(mixed), Error);
    Grid partial = g;
    partial.set(0, 0);
    CHECK_THROWS_AS(mean_matrix(std::vector<Grid>{partial}), Error);
  }
}

TEST_CASE("ensemble entropy") {
  const auto s3 = BoardSpec::sudoku(3);
  SUBCASE("complete puzzles") {
    std::vector<Puzzle> ps;
    std::vector<Grid> grids;
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      grids.push_back(random_complete_grid(s3, seed));
      ps.emplace_back(grids.back());
    }
    const double expect = shannon_entropy(singular_values(mean_matrix(grids).mean));
    CHECK(ensemble_entropy(ps, 77) == doctest::Approx(expect).epsilon(1e-12));
  }
  SUBCASE("copies of a uniquely solvable puzzle") {
    const Grid g = random_complete_grid(s3, 9);
    std::uint64_t pick = 0;
    while (count_solutions(puncture(g, 30, pick), 2).count != 1) ++pick;
    const Puzzle p = puncture(g, 30, pick);
    const double single = shannon_entropy(singular_values(as_matrix(g)));
    for (std::size_t n : {1u, 4u, 20u}) {
      const std::vector<Puzzle> ps(n, p);
      CHECK(ensemble_entropy(ps, 3) == doctest::Approx(single).epsilon(1e-12));
    }
    CHECK(solution_entropy(p, 10, 3) == doctest::Approx(single).epsilon(1e-12));
  }
  SUBCASE("blank ensemble tends toward rank one") {
    const std::vector<Puzzle> small(20, Puzzle(Grid(s3)));
    const std::vector<Puzzle> large(400, Puzzle(Grid(s3)));
    CHECK(ensemble_entropy(large, 1) < ensemble_entropy(small, 1));
    CHECK(ensemble_entropy(small, 1) == ensemble_entropy(small, 1));
  }
  SUBCASE("unsatisfiable input") {
    const Puzzle dead = parse_puzzle("12.." "...." "..3." "..4.", BoardSpec::sudoku(2));
    CHECK_THROWS(ensemble_entropy(std::vector<Puzzle>{dead}, 1));
    CHECK_THROWS(solution_entropy(dead, 3, 1));
  }
}
