#include <doctest.h>

#include <cmath>
#include <set>

#include "oracle_puzzles.hpp"
#include "sudocrit/exact_solver.hpp"
#include "sudocrit/lp_relax.hpp"

using namespace sudocrit;

namespace {

const char* kSolved9 =
    "534678912672195348198342567859761423426853791713924856961537284287419635345286179";

SparseRow row(std::vector<std::pair<int, double>> terms, double rhs) { return {std::move(terms), rhs}; }

int count_family(const LpModel& m, RowFamily f) {
  int n = 0;
  for (const auto& r : m.rows()) n += r.family == f ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("model shape") {
  SUBCASE("empty 9x9") {
    const auto m = build_ilp(Puzzle(Grid(BoardSpec::sudoku(3))));
    CHECK(m.variable_count() == 729);
    CHECK(m.structural_count() == 324);
    CHECK(m.rows().size() == 324);
    for (auto f : {RowFamily::Cell, RowFamily::ColumnValue, RowFamily::RowValue, RowFamily::BlockValue}) {
      CHECK(count_family(m, f) == 81);
    }
    for (const auto& r : m.rows()) {
      CHECK(r.vars.size() == 9);
      CHECK(r.rhs == 1.0);
      CHECK(std::set<int>(r.vars.begin(), r.vars.end()).size() == 9);
    }
  }
  SUBCASE("30 clues") {
    const Puzzle p = puncture(random_complete_grid(BoardSpec::sudoku(3), 1), 30, 2);
    const auto m = build_ilp(p);
    CHECK(m.rows().size() == 354);
    CHECK(count_family(m, RowFamily::Fixing) == 30);
    for (const auto& r : m.rows()) {
      if (r.family != RowFamily::Fixing) continue;
      REQUIRE(r.vars.size() == 1);
      CHECK(p.grid()[m.cell_of(r.vars[0])] == m.value_of(r.vars[0]));
    }
  }
  SUBCASE("empty 10x10 latin square") {
    const auto m = build_ilp(Puzzle(Grid(BoardSpec::latin_square(10))));
    CHECK(m.variable_count() == 1000);
    CHECK(m.structural_count() == 300);
    CHECK(count_family(m, RowFamily::BlockValue) == 0);
  }
  SUBCASE("every variable appears once per family") {
    const auto m = LpModel(BoardSpec::sudoku(2));
    for (auto f : {RowFamily::Cell, RowFamily::ColumnValue, RowFamily::RowValue, RowFamily::BlockValue}) {
      std::vector<int> seen(64, 0);
      for (const auto& r : m.rows()) {
        if (r.family != f) continue;
        for (int v : r.vars) ++seen[v];
      }
      for (int s : seen) CHECK(s == 1);
    }
  }
  SUBCASE("indexing") {
    const auto m = LpModel(BoardSpec::sudoku(3));
    CHECK(m.var(0, 0, 1) == 0);
    CHECK(m.var(8, 8, 9) == 728);
    CHECK(m.cell_of(m.var(4, 5, 6)) == 41);
    CHECK(m.value_of(m.var(4, 5, 6)) == 6);
    auto copy = m;
    CHECK_THROWS_AS(copy.add_fixing(729), Error);
  }
}

TEST_CASE("dense simplex on small programs") {
  for (auto rule : {PricingRule::Bland, PricingRule::DantzigBlandFallback}) {
    CAPTURE(static_cast<int>(rule));
    SUBCASE("optimum with slack columns") {
      // min -x0 - x1  s.t. x0 + x2 = 1, x1 + x3 = 2.
      const std::vector<SparseRow> rows = {row({{0, 1}, {2, 1}}, 1), row({{1, 1}, {3, 1}}, 2)};
      const std::vector<double> cost = {-1, -1, 0, 0};
      const auto r = dense_simplex(4, rows, cost, rule);
      REQUIRE(r.feasible);
      CHECK(r.x[0] == doctest::Approx(1));
      CHECK(r.x[1] == doctest::Approx(2));
      CHECK(r.x[2] == doctest::Approx(0));
      CHECK(r.x[3] == doctest::Approx(0));
    }
    SUBCASE("infeasible") {
      const std::vector<SparseRow> rows = {row({{0, 1}, {1, 1}}, 1), row({{0, 1}, {1, 1}}, 2)};
      CHECK_FALSE(dense_simplex(2, rows, {}, rule).feasible);
      const std::vector<SparseRow> negative = {row({{0, 1}}, -1)};
      CHECK_FALSE(dense_simplex(1, negative, {}, rule).feasible);
    }
    SUBCASE("redundant row") {
      const std::vector<SparseRow> rows = {row({{0, 1}, {1, 1}}, 1), row({{0, 2}, {1, 2}}, 2),
                                           row({{0, 1}, {1, -1}}, 0)};
      const auto r = dense_simplex(2, rows, {}, rule);
      REQUIRE(r.feasible);
      CHECK(r.redundant_rows == 1);
      CHECK(r.x[0] == doctest::Approx(0.5));
      CHECK(r.x[1] == doctest::Approx(0.5));
    }
    SUBCASE("degenerate program that cycles under naive pricing") {
      // A classic cycling example; optimum -1/20 at x3 = 1/25, x5 = 1.
      const std::vector<SparseRow> rows = {
          row({{3, 0.25}, {4, -60}, {5, -1.0 / 25}, {6, 9}, {0, 1}}, 0),
          row({{3, 0.5}, {4, -90}, {5, -1.0 / 50}, {6, 3}, {1, 1}}, 0),
          row({{5, 1}, {2, 1}}, 1)};
      const std::vector<double> cost = {0, 0, 0, -0.75, 150, -1.0 / 50, 6};
      const auto r = dense_simplex(7, rows, cost, rule);
      REQUIRE(r.feasible);
      double obj = 0;
      for (int j = 0; j < 7; ++j) obj += cost[j] * r.x[j];
      CHECK(obj == doctest::Approx(-0.05));
      CHECK(r.x[3] == doctest::Approx(0.04));
      CHECK(r.x[5] == doctest::Approx(1));
    }
    SUBCASE("unbounded") {
      const std::vector<SparseRow> rows = {row({{0, 1}, {1, -1}}, 1)};
      const std::vector<double> cost = {-1, 0};
      CHECK_THROWS(dense_simplex(2, rows, cost, rule));
    }
  }
  SUBCASE("argument checks") {
    const std::vector<SparseRow> rows = {row({{3, 1}}, 1)};
    CHECK_THROWS(dense_simplex(2, rows));
    const std::vector<double> cost = {1};
    CHECK_THROWS(dense_simplex(2, std::vector<SparseRow>{row({{0, 1}}, 1)}, cost));
  }
  SUBCASE("no rows") {
    const auto r = dense_simplex(3, std::vector<SparseRow>{});
    CHECK(r.feasible);
    CHECK(r.x == std::vector<double>(3, 0.0));
  }
}

TEST_CASE("relaxation examples") {
  const auto s3 = BoardSpec::sudoku(3);
  const Grid solved = parse_puzzle(kSolved9, s3).grid();
  SUBCASE("complete grid") {
    for (bool elim : {false, true}) {
      LpOptions opt;
      opt.eliminate_fixings = elim;
      const auto m = build_ilp(Puzzle(solved));
      const auto sol = solve_relaxation(m, opt);
      REQUIRE(sol.status == LpStatus::Feasible);
      CHECK(is_integral(sol));
      CHECK(sol.max_residual <= 1e-7);
      const auto g = decode_solution(m, sol);
      REQUIRE(g);
      CHECK(*g == solved);
      if (elim) CHECK(sol.pivots == 0);
    }
  }
  SUBCASE("contradictory fixings") {
    for (bool elim : {false, true}) {
      LpOptions opt;
      opt.eliminate_fixings = elim;
      LpModel m(s3);
      m.add_fixing(m.var(0, 0, 1));
      m.add_fixing(m.var(0, 0, 2));
      const auto sol = solve_relaxation(m, opt);
      CHECK(sol.status == LpStatus::Infeasible);
      CHECK_THROWS_AS(is_integral(sol), Error);
      CHECK_FALSE(decode_solution(m, sol));
    }
  }
  SUBCASE("is_integral thresholds") {
    LpSolution s;
    s.status = LpStatus::Feasible;
    s.values = {0.0, 1.0, 0.5, 0.5};
    s.max_fractionality = 0.5;
    CHECK_FALSE(is_integral(s, 1e-6));
    s.max_fractionality = 0.0;
    CHECK(is_integral(s, 1e-6));
  }
  SUBCASE("bad tolerance") {
    CHECK_THROWS_AS(solve_relaxation(LpModel(BoardSpec::sudoku(2)), LpOptions{0.0}), Error);
  }
  SUBCASE("determinism and residuals on 9x9") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const Puzzle p = puncture(random_complete_grid(s3, seed), 35 + 5 * static_cast<int>(seed), seed);
      const auto m = build_ilp(p);
      const auto a = solve_relaxation(m);
      const auto b = solve_relaxation(m);
      REQUIRE(a.status == LpStatus::Feasible);
      CHECK(a.values == b.values);
      CHECK(a.pivots == b.pivots);
      CHECK(a.max_residual <= 1e-7);
      for (double x : a.values) {
        CHECK(x >= -1e-7);
        CHECK(x <= 1 + 1e-7);
      }
      LpOptions elim;
      elim.eliminate_fixings = true;
      CHECK(is_integral(solve_relaxation(m, elim)) == is_integral(a));
    }
  }
}

TEST_CASE("relaxation against the 4x4 oracle (property)") {
  const auto s2 = BoardSpec::sudoku(2);
  std::mt19937_64 rng(17);
  int integral = 0;
  int unique = 0;
  int unique_integral = 0;
  for (int trial = 0; trial < 1200; ++trial) {
    const auto clues = oracle::random_puzzle(oracle::all_4x4(), 0.1 + 0.07 * (trial % 8), rng);
    const auto sols = oracle::solutions(oracle::kSudoku4, clues);
    const Puzzle p = oracle::to_puzzle(clues, s2);
    const auto m = build_ilp(p);
    // Every completion encodes to a feasible 0/1 point.
    for (const auto& s : sols) {
      const auto x = encode_grid(m, oracle::to_puzzle(s, s2).grid());
      CHECK(max_violation(m, x) == 0.0);
    }
    const auto sol = solve_relaxation(m);
    REQUIRE(sol.status == LpStatus::Feasible);
    LpOptions elim;
    elim.eliminate_fixings = true;
    const auto fast = solve_relaxation(m, elim);
    CHECK(is_integral(fast) == is_integral(sol));
    if (sols.size() == 1) ++unique;
    if (!is_integral(sol)) {
      CHECK_FALSE(decode_solution(m, sol));
      continue;
    }
    ++integral;
    // An integral vertex is one of the completions.
    const auto g = decode_solution(m, sol);
    REQUIRE(g);
    const oracle::Cells cells(g->cells().begin(), g->cells().end());
    CHECK(std::find(sols.begin(), sols.end(), cells) != sols.end());
    if (sols.size() == 1) ++unique_integral;
  }
  CHECK(integral > 0);
  CHECK(unique > 100);
  // Uniquely solvable 4x4 puzzles always land on the integral vertex.
  CHECK(unique_integral == unique);
}

TEST_CASE("every 4x4 grid encodes and decodes (exhaustive)") {
  const auto s2 = BoardSpec::sudoku(2);
  const LpModel m(s2);
  for (const auto& cells : oracle::all_4x4()) {
    const Grid g = oracle::to_puzzle(cells, s2).grid();
    LpSolution s;
    s.status = LpStatus::Feasible;
    s.values = encode_grid(m, g);
    CHECK(max_violation(m, s.values) == 0.0);
    const auto back = decode_solution(m, s);
    REQUIRE(back);
    CHECK(*back == g);
  }
  // Any other 0/1 point with one value per cell violates some row.
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> x(64, 0.0);
    oracle::Cells cells(16);
    for (int c = 0; c < 16; ++c) {
      cells[c] = 1 + static_cast<int>(rng() % 4);
      x[c * 4 + cells[c] - 1] = 1.0;
    }
    const auto grids = oracle::all_4x4();
    const bool valid = std::find(grids.begin(), grids.end(), cells) != grids.end();
    CHECK((max_violation(m, x) == 0.0) == valid);
  }
  CHECK_THROWS_AS(encode_grid(m, Grid(s2)), Error);
  CHECK_THROWS_AS(encode_grid(m, random_complete_grid(BoardSpec::sudoku(3), 1)), Error);
}

TEST_CASE("LP text export") {
  LpModel m(BoardSpec::sudoku(2));
  m.add_fixing(m.var(1, 2, 3));
  const std::string text = m.to_lp_format();
  CHECK(text.rfind("\\ board sudoku-2, 64 variables, 65 equality rows\n", 0) == 0);
  CHECK(text.find("Minimize\n obj: 0 x_1_1_1\n") != std::string::npos);
  CHECK(text.find(" cell_1: x_1_1_1 + x_1_1_2 + x_1_1_3 + x_1_1_4 = 1\n") != std::string::npos);
  CHECK(text.find(" fixing_1: x_2_3_3 = 1\n") != std::string::npos);
  CHECK(text.find(" 0 <= x_4_4_4 <= 1\n") != std::string::npos);
  CHECK(text.size() >= 4);
  CHECK(text.substr(text.size() - 4) == "End\n");
  std::size_t rows = 0;
  for (std::size_t at = text.find(" = 1\n"); at != std::string::npos; at = text.find(" = 1\n", at + 1)) ++rows;
  CHECK(rows == 65);
}
