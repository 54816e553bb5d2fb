#include <doctest.h>

#include <random>
#include <set>

#include "oracle.hpp"
#include "sudocrit/candidates.hpp"
#include "sudocrit/exact_solver.hpp"

using namespace sudocrit;

namespace {

const char* kSolved9 =
    "534678912672195348198342567859761423426853791713924856961537284287419635345286179";

const oracle::Board kOracle4{4, 2};

oracle::Cells cells_of(const Grid& g) { return {g.cells().begin(), g.cells().end()}; }

Puzzle puzzle_of(const BoardSpec& spec, const oracle::Cells& cells) {
  return Puzzle(Grid(spec, std::vector<std::uint8_t>(cells.begin(), cells.end())));
}

const std::vector<oracle::Cells>& all_4x4() {
  static const auto grids = oracle::solutions(kOracle4, oracle::Cells(16, 0));
  return grids;
}

SolverConfig level(PropagationLevel l, std::uint64_t seed = 0) {
  SolverConfig c;
  c.propagation = l;
  c.seed = seed;
  return c;
}

constexpr PropagationLevel kLevels[] = {PropagationLevel::NakedSingles,
                                        PropagationLevel::HiddenSingles,
                                        PropagationLevel::AllDifferent};

}  // namespace

TEST_CASE("brute-force oracle sanity") {
  CHECK(all_4x4().size() == 288);
  std::set<oracle::Cells> distinct(all_4x4().begin(), all_4x4().end());
  CHECK(distinct.size() == 288);
}

TEST_CASE("propagate") {
  const auto s3 = BoardSpec::sudoku(3);
  SUBCASE("complete grid minus one cell is filled") {
    Grid g = parse_puzzle(kSolved9, s3).grid();
    g.set(40, 0);
    for (auto l : kLevels) {
      CandidateState st{Puzzle(g)};
      CHECK(st.propagate(l) == Propagation::Stable);
      CHECK(st.value(40) == parse_puzzle(kSolved9, s3).grid()[40]);
      CHECK(st.is_complete());
    }
  }
  SUBCASE("contradiction from clues") {
    const Puzzle p = parse_puzzle("..12" "4..." "...." "....", BoardSpec::sudoku(2));
    // cell 1 must avoid 1, 2 (row) and 4 (box) -> 3; cell 0 then has nothing.
    CandidateState st{p};
    CHECK(st.propagate(PropagationLevel::NakedSingles) == Propagation::Contradiction);
  }
  SUBCASE("empty board is stable and unchanged") {
    for (auto l : kLevels) {
      CandidateState st{Puzzle(Grid(s3))};
      CHECK(st.propagate(l) == Propagation::Stable);
      CHECK(st.assigned_count() == 0);
      for (int c = 0; c < 81; ++c) CHECK(st.candidates(c) == full_mask(9));
    }
  }
  SUBCASE("invariants after propagation") {
    const Grid g = random_complete_grid(s3, 4);
    for (auto l : kLevels) {
      CandidateState st{puncture(g, 30, 9)};
      REQUIRE(st.propagate(l) == Propagation::Stable);
      const auto& t = st.topology();
      for (int c = 0; c < 81; ++c) {
        if (st.is_assigned(c)) CHECK(st.candidates(c) == value_bit(st.value(c)));
        for (int n : t.neighbors(c)) {
          if (st.is_assigned(n)) CHECK((st.candidates(c) & value_bit(st.value(n))) == 0);
        }
      }
    }
  }
  SUBCASE("alldifferent prunes a naked pair") {
    // Row 0: cells 0 and 1 restricted to {1,2}; alldifferent removes 1 and 2
    // from the other cells of the row and block, naked singles do not.
    CandidateState weak(Topology::of(s3));
    for (int v = 3; v <= 9; ++v) {
      weak.remove(0, v);
      weak.remove(1, v);
    }
    CandidateState strong = weak;
    REQUIRE(weak.propagate(PropagationLevel::NakedSingles) == Propagation::Stable);
    REQUIRE(strong.propagate(PropagationLevel::AllDifferent) == Propagation::Stable);
    CHECK(weak.candidates(5) == full_mask(9));
    CHECK(strong.candidates(5) == (full_mask(9) & ~value_bit(1) & ~value_bit(2)));
    CHECK(strong.candidates(19) == (full_mask(9) & ~value_bit(1) & ~value_bit(2)));
    CHECK(strong.candidates(27) == full_mask(9));  // column 0 outside the block
  }
  SUBCASE("hidden single") {
    // Value 1 removed from every cell of row 0 except cell 4.
    CandidateState st(Topology::of(s3));
    for (int c = 0; c < 9; ++c) {
      if (c != 4) st.remove(c, 1);
    }
    CandidateState naked = st;
    REQUIRE(st.propagate(PropagationLevel::HiddenSingles) == Propagation::Stable);
    CHECK(st.value(4) == 1);
    REQUIRE(naked.propagate(PropagationLevel::NakedSingles) == Propagation::Stable);
    CHECK(naked.value(4) == 0);
  }
}

TEST_CASE("solve_one") {
  const auto s3 = BoardSpec::sudoku(3);
  const Grid solved = parse_puzzle(kSolved9, s3).grid();
  SUBCASE("complete minus one cell") {
    Grid g = solved;
    g.set(0, 0);
    for (auto l : kLevels) {
      const auto r = solve_one(Puzzle(g), level(l));
      REQUIRE(r.satisfiable());
      CHECK(*r.solution == solved);
      CHECK(r.stats.backtracks == 0);
    }
  }
  SUBCASE("empty 4x4") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      SolverConfig cfg;
      cfg.seed = seed;
      const auto r = solve_one(Puzzle(Grid(BoardSpec::sudoku(2))), cfg);
      REQUIRE(r.satisfiable());
      CHECK(is_valid_complete(*r.solution, *Topology::of(BoardSpec::sudoku(2))));
    }
  }
  SUBCASE("unsatisfiable by flipping a cell to an unsupported value") {
    // Take a uniquely solvable puzzle (the solution with 40 clues, checked
    // unique below), pick an empty cell and give it a value that the
    // uniqueness proves unsupported but that does not clash with clues.
    std::uint64_t pick = 0;
    while (count_solutions(puncture(solved, 40, pick), 2).count != 1) ++pick;
    const Puzzle base = puncture(solved, 40, pick);
    bool built = false;
    for (int cell = 0; cell < 81 && !built; ++cell) {
      if (base.is_clue(cell)) continue;
      for (int v = 1; v <= 9 && !built; ++v) {
        if (v == solved[cell]) continue;
        Grid g = base.grid();
        g.set(cell, v);
        if (!is_conflict_free(g, *Topology::of(s3))) continue;
        const Puzzle bad(g);
        built = true;
        for (auto l : kLevels) {
          CHECK_FALSE(solve_one(bad, level(l)).satisfiable());
          CHECK(count_solutions(bad, 10, level(l)).count == 0);
          CHECK(enumerate_solutions(bad, 10, level(l)).empty());
        }
      }
    }
    CHECK(built);
  }
  SUBCASE("soundness and determinism (property)") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const Grid g = random_complete_grid(s3, seed + 100);
      const Puzzle p = puncture(g, 20 + static_cast<int>(seed % 15), seed);
      SolverConfig cfg;
      cfg.seed = seed;
      const auto a = solve_one(p, cfg);
      const auto b = solve_one(p, cfg);
      REQUIRE(a.satisfiable());
      CHECK(is_valid_complete(*a.solution, *Topology::of(s3)));
      for (int c = 0; c < 81; ++c) {
        if (p.is_clue(c)) CHECK((*a.solution)[c] == p.grid()[c]);
      }
      CHECK(*a.solution == *b.solution);
      CHECK(a.stats == b.stats);
      CHECK(a.stats.backtracks <= a.stats.nodes);
    }
  }
  SUBCASE("cell and value orders") {
    const Puzzle p = puncture(random_complete_grid(s3, 5), 24, 6);
    for (auto co : {CellOrder::FirstEmpty, CellOrder::MinimumCandidates}) {
      for (auto vo : {ValueOrder::Ascending, ValueOrder::SeededShuffle}) {
        SolverConfig cfg;
        cfg.cell_order = co;
        cfg.value_order = vo;
        const auto r = solve_one(p, cfg);
        REQUIRE(r.satisfiable());
        CHECK(is_valid_complete(*r.solution, *Topology::of(s3)));
      }
    }
  }
}

TEST_CASE("count and enumerate") {
  const auto s2 = BoardSpec::sudoku(2);
  const auto s3 = BoardSpec::sudoku(3);
  SUBCASE("empty 4x4 has 288 completions") {
    for (auto l : kLevels) {
      const auto r = count_solutions(Puzzle(Grid(s2)), 1000000, level(l));
      CHECK(r.count == 288);
      CHECK_FALSE(r.capped);
    }
    const auto grids = enumerate_solutions(Puzzle(Grid(s2)), 1000);
    std::set<oracle::Cells> mine;
    for (const auto& g : grids) mine.insert(cells_of(g));
    CHECK(mine == std::set<oracle::Cells>(all_4x4().begin(), all_4x4().end()));
  }
  SUBCASE("complete minus one cell") {
    Grid g = parse_puzzle(kSolved9, s3).grid();
    g.set(80, 0);
    CHECK(count_solutions(Puzzle(g), 5).count == 1);
    CHECK(enumerate_solutions(Puzzle(g), 5).size() == 1);
  }
  SUBCASE("empty 9x9 is capped") {
    const auto r = count_solutions(Puzzle(Grid(s3)), 1000);
    CHECK(r.count == 1000);
    CHECK(r.capped);
  }
  SUBCASE("rectangles of holes against the oracle") {
    // Emptying the four corners of a rectangle leaves one or two
    // completions; the oracle says which.
    const oracle::Cells full = all_4x4()[37];
    int doubles = 0;
    for (int r1 = 0; r1 < 4; ++r1) {
      for (int r2 = r1 + 1; r2 < 4; ++r2) {
        for (int c1 = 0; c1 < 4; ++c1) {
          for (int c2 = c1 + 1; c2 < 4; ++c2) {
            oracle::Cells holes = full;
            for (int cell : {r1 * 4 + c1, r1 * 4 + c2, r2 * 4 + c1, r2 * 4 + c2}) holes[cell] = 0;
            const auto expect = oracle::solutions(kOracle4, holes);
            const auto got = enumerate_solutions(puzzle_of(s2, holes), 10);
            REQUIRE(got.size() == expect.size());
            std::set<oracle::Cells> mine;
            for (const auto& g : got) mine.insert(cells_of(g));
            CHECK(mine == std::set<oracle::Cells>(expect.begin(), expect.end()));
            doubles += expect.size() == 2 ? 1 : 0;
          }
        }
      }
    }
    CHECK(doubles > 0);
  }
  SUBCASE("cap must be positive") {
    CHECK_THROWS_AS(count_solutions(Puzzle(Grid(s2)), 0), Error);
    CHECK_THROWS_AS(enumerate_solutions(Puzzle(Grid(s2)), 0), Error);
  }
  SUBCASE("enumeration order is deterministic") {
    const Puzzle p = puncture(random_complete_grid(s3, 8), 22, 3);
    CHECK(enumerate_solutions(p, 50) == enumerate_solutions(p, 50));
  }
  SUBCASE("random 4x4 puzzles against the oracle (property)") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 1500; ++trial) {
      const auto clues = oracle::random_puzzle(all_4x4(), 0.1 + 0.5 * (trial % 7) / 6.0, rng);
      const auto expect = oracle::solutions(kOracle4, clues).size();
      for (auto l : kLevels) {
        CHECK(count_solutions(puzzle_of(s2, clues), 1000, level(l, trial)).count == expect);
      }
    }
  }
  SUBCASE("propagation level never changes 9x9 counts") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Puzzle p = puncture(random_complete_grid(s3, seed), 26, seed + 1);
      const auto a = count_solutions(p, 50, level(PropagationLevel::NakedSingles)).count;
      CHECK(count_solutions(p, 50, level(PropagationLevel::HiddenSingles)).count == a);
      CHECK(count_solutions(p, 50, level(PropagationLevel::AllDifferent)).count == a);
    }
  }
  SUBCASE("adding a consistent clue never increases the count (property)") {
    std::mt19937_64 rng(99);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const Grid g = random_complete_grid(s3, seed);
      const Puzzle p = puncture(g, 28, seed);
      const auto before = count_solutions(p, 200).count;
      for (int k = 0; k < 3; ++k) {
        int cell = static_cast<int>(rng() % 81);
        while (p.is_clue(cell)) cell = (cell + 1) % 81;
        CHECK(count_solutions(p.with_clue(cell, g[cell]), 200).count <= before);
      }
    }
  }
}

TEST_CASE("generator") {
  const auto s3 = BoardSpec::sudoku(3);
  CHECK(random_complete_grid(s3, 42) == random_complete_grid(s3, 42));
  CHECK(random_complete_grid(s3, 1) != random_complete_grid(s3, 2));
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    CHECK(hamiltonian(random_complete_grid(s3, seed), *Topology::of(s3)) == 0);
  }
  SUBCASE("latin square of side 10") {
    const auto l10 = BoardSpec::latin_square(10);
    const Grid g = random_complete_grid(l10, 7);
    for (int r = 0; r < 10; ++r) {
      std::set<int> row, col;
      for (int c = 0; c < 10; ++c) {
        row.insert(g.at(r, c));
        col.insert(g.at(c, r));
      }
      CHECK(row.size() == 10);
      CHECK(col.size() == 10);
    }
  }
  SUBCASE("puncture") {
    const Grid g = random_complete_grid(s3, 3);
    CHECK(puncture(g, 81, 5).grid() == g);
    CHECK(puncture(g, 0, 5).clue_count() == 0);
    CHECK(puncture(g, 30, 5) == puncture(g, 30, 5));
    CHECK(puncture(g, 30, 5).clue_count() == 30);
    CHECK_THROWS_AS(puncture(g, -1, 5), Error);
    CHECK_THROWS_AS(puncture(g, 82, 5), Error);
    CHECK_THROWS_AS(puncture(Grid(s3), 10, 5), Error);
    // nested clue sets for one seed
    const auto small = puncture(g, 20, 9).clue_mask();
    const auto large = puncture(g, 45, 9).clue_mask();
    for (int c = 0; c < 81; ++c) {
      if (small[c]) CHECK(large[c]);
    }
  }
  SUBCASE("puncture picks every cell about equally often") {
    const Grid g = random_complete_grid(s3, 3);
    std::vector<int> hits(81, 0);
    const int trials = 4000;
    for (int t = 0; t < trials; ++t) {
      const auto m = puncture(g, 20, static_cast<std::uint64_t>(t)).clue_mask();
      for (int c = 0; c < 81; ++c) hits[c] += m[c];
    }
    // Expected 4000 * 20/81 ~ 988 per cell, sd ~ 27; allow 6 sd.
    for (int c = 0; c < 81; ++c) CHECK(std::abs(hits[c] - 988) < 165);
  }
}
