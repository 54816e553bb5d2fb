// Command-line front end: puzzle generation, one-shot analyses, sweeps and
// critical-point extraction.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sudocrit/backbone.hpp"
#include "sudocrit/ensemble.hpp"
#include "sudocrit/exact_solver.hpp"
#include "sudocrit/lp_relax.hpp"
#include "sudocrit/spectral.hpp"
#include "sudocrit/strategy_solver.hpp"
#include "sudocrit/sweep.hpp"

namespace {

using namespace sudocrit;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

// Runs `f`, reporting a library Error as a bad value for `flag`.
template <class F>
auto flag_value(const std::string& flag, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw CLI::ValidationError(flag, e.what());
  }
}

struct BoardOptions {
  std::string variant = "sudoku";
  int order = 3;

  BoardSpec spec() const {
    const Variant v = flag_value("--variant", [&] { return parse_variant(variant); });
    return flag_value("--order", [&] {
      return v == Variant::Sudoku ? BoardSpec::sudoku(order) : BoardSpec::latin_square(order);
    });
  }
};

void add_board_options(CLI::App* cmd, BoardOptions& b) {
  cmd->add_option("--variant", b.variant, "sudoku or latin")->capture_default_str();
  cmd->add_option("--order", b.order,
                  "box size n for sudoku (side n*n), side m for latin squares")
      ->capture_default_str();
}

// A puzzle given inline or as the first puzzle of a file.
struct PuzzleInput {
  std::string text;
  std::string file;

  void attach(CLI::App* cmd) {
    auto* p = cmd->add_option("--puzzle", text, "puzzle text ('.' or 0 for empty cells)");
    auto* f = cmd->add_option("--in", file, "file with one puzzle per line (first one is used)");
    p->excludes(f);
  }

  Puzzle load(const BoardSpec& spec) const {
    if (!text.empty()) return parse_puzzle(text, spec);
    if (!file.empty()) return ingest_dataset(file, spec).puzzles.front();
    throw CLI::RequiredError("--puzzle or --in");
  }
};

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw Error("cannot write " + path);
  return file;
}

void print_stats(const SearchStats& s) {
  std::cout << "backtracks " << s.backtracks << "\nnodes " << s.nodes << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random Sudoku and Latin-square ensembles: solvers and phase-transition sweeps"};
  app.require_subcommand(1);

  BoardOptions board;
  std::uint64_t seed = 1;
  std::string out_path;

  // generate
  auto* gen = app.add_subcommand("generate", "emit random puzzles, one per line");
  add_board_options(gen, board);
  int gen_clues = 0;
  int gen_ensemble = 1;
  gen->add_option("--clues", gen_clues, "clues per puzzle")->required();
  gen->add_option("--ensemble", gen_ensemble, "number of puzzles")->capture_default_str();
  gen->add_option("--seed", seed, "master seed")->capture_default_str();
  gen->add_option("--out", out_path, "output file (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "solve one puzzle and print search statistics");
  add_board_options(solve, board);
  PuzzleInput solve_in;
  solve_in.attach(solve);
  std::uint64_t cap = 0;
  solve->add_option("--seed", seed, "value-order seed")->capture_default_str();
  solve->add_option("--cap", cap, "also count solutions up to this cap");

  // backbone
  auto* bb = app.add_subcommand("backbone", "frozen cells of one puzzle");
  add_board_options(bb, board);
  PuzzleInput bb_in;
  bb_in.attach(bb);
  bb->add_option("--seed", seed, "probe seed")->capture_default_str();

  // lp
  auto* lp = app.add_subcommand("lp", "solve the LP relaxation of one puzzle");
  add_board_options(lp, board);
  PuzzleInput lp_in;
  lp_in.attach(lp);
  bool lp_eliminate = false;
  std::string lp_export;
  lp->add_flag("--eliminate", lp_eliminate, "substitute forced variables first");
  lp->add_option("--export", lp_export, "also write the model in LP format to this file");

  // entropy
  auto* ent = app.add_subcommand(
      "entropy", "spectral entropy of a generated ensemble, or of one puzzle's solutions");
  add_board_options(ent, board);
  PuzzleInput ent_in;
  ent_in.attach(ent);
  int ent_clues = -1;
  int ent_ensemble = 1000;
  int ent_samples = 50;
  ent->add_option("--clues", ent_clues, "generate an ensemble with this many clues");
  ent->add_option("--ensemble", ent_ensemble, "ensemble size")->capture_default_str();
  ent->add_option("--entropy-samples", ent_samples, "solutions per puzzle")->capture_default_str();
  ent->add_option("--seed", seed, "master seed")->capture_default_str();

  // strategies
  auto* strat = app.add_subcommand("strategies", "strategy trace of one puzzle or an ensemble profile");
  add_board_options(strat, board);
  PuzzleInput strat_in;
  strat_in.attach(strat);
  int strat_clues = -1;
  int strat_ensemble = 1000;
  strat->add_option("--clues", strat_clues, "profile a generated ensemble with this many clues");
  strat->add_option("--ensemble", strat_ensemble, "ensemble size")->capture_default_str();
  strat->add_option("--seed", seed, "seed")->capture_default_str();

  // sweep
  auto* sw = app.add_subcommand("sweep", "run metrics over clue counts and write a CSV");
  add_board_options(sw, board);
  std::string sweep_clues;
  std::vector<std::string> sweep_metrics{"hardness"};
  SweepConfig cfg;
  std::uint64_t sweep_cap = 2;
  std::string propagation = "alldifferent";
  sw->add_option("--clues", sweep_clues, "clue counts: 17..50, 20..60:5 or 20,25,30")->required();
  sw->add_option("--ensemble", cfg.ensemble_size, "instances per clue count")->capture_default_str();
  sw->add_option("--seed", cfg.master_seed, "master seed")->capture_default_str();
  sw->add_option("--metrics", sweep_metrics, "hardness backbone lp entropy strategies")
      ->delimiter(',')
      ->capture_default_str();
  sw->add_option("--cap", sweep_cap, "solution-count cap recorded with hardness (0 disables)")
      ->capture_default_str();
  sw->add_option("--propagation", propagation, "naked, hidden or alldifferent")
      ->capture_default_str();
  sw->add_option("--threads", cfg.threads, "worker threads (0 = all cores)")->capture_default_str();
  sw->add_option("--entropy-samples", cfg.entropy_samples, "solutions per puzzle for solution_entropy")
      ->capture_default_str();
  sw->add_option("--out", out_path, "CSV path")->required();
  sw->add_option("--grids-out", cfg.solutions_out, "file for the solved grids behind the entropy rows");

  // critical
  auto* crit = app.add_subcommand("critical", "critical clue count of a metric in a sweep CSV");
  std::string crit_in;
  std::string crit_metric;
  std::string crit_stat = "mean";
  std::string crit_kind = "auto";
  crit->add_option("--in", crit_in, "sweep CSV")->required();
  crit->add_option("--metric", crit_metric, "metric column value, e.g. backtracks")->required();
  crit->add_option("--statistic", crit_stat, "statistic column value")->capture_default_str();
  crit->add_option("--kind", crit_kind, "auto, peak or crossing")->capture_default_str();

  // ingest
  auto* ing = app.add_subcommand("ingest", "read a puzzle file and print its clue histogram");
  add_board_options(ing, board);
  std::string ing_in;
  ing->add_option("--in", ing_in, "puzzle file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      const BoardSpec spec = board.spec();
      std::ofstream file;
      std::ostream& out = open_out(out_path, file);
      for (const auto& p : generate_ensemble(spec, gen_clues, gen_ensemble, seed)) {
        out << serialize_puzzle(p) << '\n';
      }
    } else if (*solve) {
      const BoardSpec spec = board.spec();
      const Puzzle puzzle = solve_in.load(spec);
      SolverConfig sc;
      sc.seed = seed;
      const SolveResult r = solve_one(puzzle, sc);
      std::cout << "solution " << (r.solution ? serialize_grid(*r.solution) : "none") << "\n";
      print_stats(r.stats);
      if (cap > 0) {
        const CountResult c = count_solutions(puzzle, cap, sc);
        std::cout << "solutions " << c.count << (c.capped ? "+" : "") << "\n";
      }
      if (!r.solution) return kExitData;
    } else if (*bb) {
      const BoardSpec spec = board.spec();
      SolverConfig sc;
      sc.seed = seed;
      const BackboneReport r = backbone_report(bb_in.load(spec), sc);
      std::cout << "empty_cells " << r.empty_count << "\nbackbone_size " << r.backbone_size
                << "\nbackbone_fraction " << r.backbone_fraction << "\nfrozen";
      for (int c : r.frozen_cells) std::cout << ' ' << c;
      std::cout << "\n";
    } else if (*lp) {
      const BoardSpec spec = board.spec();
      const LpModel model = build_ilp(lp_in.load(spec));
      if (!lp_export.empty()) {
        std::ofstream f(lp_export);
        if (!f) throw Error("cannot write " + lp_export);
        f << model.to_lp_format();
      }
      LpOptions opt;
      opt.eliminate_fixings = lp_eliminate;
      const LpSolution s = solve_relaxation(model, opt);
      std::cout << "variables " << model.variable_count() << "\nrows " << model.rows().size()
                << "\nstatus " << (s.status == LpStatus::Feasible ? "feasible" : "infeasible") << "\n";
      if (s.status == LpStatus::Feasible) {
        std::cout << "integral " << (is_integral(s) ? "yes" : "no") << "\nmax_fractionality "
                  << s.max_fractionality << "\nmax_residual " << s.max_residual << "\npivots "
                  << s.pivots << "\n";
        if (auto g = decode_solution(model, s)) std::cout << "solution " << serialize_grid(*g) << "\n";
      }
    } else if (*ent) {
      const BoardSpec spec = board.spec();
      if (ent_clues >= 0) {
        const auto puzzles = generate_ensemble(spec, ent_clues, ent_ensemble, seed);
        std::cout << "entropy " << ensemble_entropy(puzzles, seed) << "\n";
      } else {
        const Puzzle p = ent_in.load(spec);
        std::cout << "solution_entropy " << solution_entropy(p, ent_samples, seed) << "\n";
      }
    } else if (*strat) {
      const BoardSpec spec = board.spec();
      if (strat_clues >= 0) {
        const auto puzzles = generate_ensemble(spec, strat_clues, strat_ensemble, seed);
        const StrategyProfile p = strategy_profile(puzzles, seed);
        std::cout << "strategy frequency mean_count\n";
        for (Strategy s : kAllStrategies) {
          std::cout << strategy_name(s) << ' ' << p.frequency[static_cast<int>(s)] << ' '
                    << p.mean_count[static_cast<int>(s)] << "\n";
        }
        std::cout << "distinct_mean " << p.distinct_mean << "\ndistinct_variance "
                  << p.distinct_variance << "\n";
      } else {
        const StrategySolveResult r = strategy_solve(strat_in.load(spec), seed);
        std::cout << "solution " << (r.solution ? serialize_grid(*r.solution) : "none") << "\n";
        for (Strategy s : kAllStrategies) {
          std::cout << strategy_name(s) << ' ' << r.trace.count(s) << "\n";
        }
        if (!r.solution) return kExitData;
      }
    } else if (*sw) {
      cfg.spec = board.spec();
      cfg.clue_counts = flag_value("--clues", [&] { return parse_clue_counts(sweep_clues); });
      cfg.metrics.clear();
      for (const auto& m : sweep_metrics) {
        cfg.metrics.push_back(flag_value("--metrics", [&] { return parse_metric(m); }));
      }
      cfg.solution_cap = sweep_cap == 0 ? std::nullopt : std::optional<std::uint64_t>(sweep_cap);
      if (propagation == "naked") {
        cfg.solver.propagation = PropagationLevel::NakedSingles;
      } else if (propagation == "hidden") {
        cfg.solver.propagation = PropagationLevel::HiddenSingles;
      } else if (propagation == "alldifferent") {
        cfg.solver.propagation = PropagationLevel::AllDifferent;
      } else {
        throw CLI::ValidationError("--propagation", "unknown level " + propagation);
      }
      cfg.progress = [](std::size_t done, std::size_t total) {
        std::fprintf(stderr, "\r%zu/%zu clue counts", done, total);
        if (done == total) std::fputc('\n', stderr);
      };
      flag_value("sweep", [&] { validate(cfg); });
      write_csv(out_path, run_sweep(cfg));
    } else if (*crit) {
      const auto rows = read_csv(crit_in);
      CriticalKind kind = CriticalKind::Auto;
      if (crit_kind == "peak") {
        kind = CriticalKind::Peak;
      } else if (crit_kind == "crossing") {
        kind = CriticalKind::Crossing;
      } else if (crit_kind != "auto") {
        throw CLI::ValidationError("--kind", "expected auto, peak or crossing");
      }
      std::vector<std::string> ids;
      for (const auto& r : rows) {
        if (std::find(ids.begin(), ids.end(), r.spec_id) == ids.end()) ids.push_back(r.spec_id);
      }
      int printed = 0;
      for (const auto& id : ids) {
        std::vector<SweepRow> subset;
        for (const auto& r : rows) {
          if (r.spec_id == id) subset.push_back(r);
        }
        if (series(subset, crit_metric, crit_stat).empty()) continue;
        std::cout << id << ' ' << critical_point(subset, crit_metric, crit_stat, kind) << "\n";
        ++printed;
      }
      if (printed == 0) throw Error("no rows for " + crit_metric + "/" + crit_stat + " in " + crit_in);
    } else if (*ing) {
      const IngestResult r = ingest_dataset(ing_in, board.spec());
      std::cout << "puzzles " << r.puzzles.size() << "\nerrors " << r.errors.size() << "\n";
      for (const auto& e : r.errors) std::cerr << ing_in << ':' << e.line << ": " << e.message << "\n";
      std::cout << "clues count\n";
      for (const auto& [clues, n] : r.clue_histogram) std::cout << clues << ' ' << n << "\n";
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitInternal;
  } catch (const InstanceFailure& e) {
    std::cerr << "internal failure: " << e.what() << "\n";
    return kExitInternal;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal failure: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
