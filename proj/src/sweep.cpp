#include "sudocrit/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "sudocrit/backbone.hpp"
#include "sudocrit/ensemble.hpp"
#include "sudocrit/lp_relax.hpp"
#include "sudocrit/random.hpp"
#include "sudocrit/spectral.hpp"
#include "sudocrit/strategy_solver.hpp"

namespace sudocrit {

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::Hardness: return "hardness";
    case Metric::Backbone: return "backbone";
    case Metric::Lp: return "lp";
    case Metric::Entropy: return "entropy";
    case Metric::Strategies: return "strategies";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  for (Metric m : {Metric::Hardness, Metric::Backbone, Metric::Lp, Metric::Entropy,
                   Metric::Strategies}) {
    if (metric_name(m) == name) return m;
  }
  throw Error("unknown metric: " + std::string(name));
}

std::vector<int> parse_clue_counts(std::string_view text) {
  auto number = [&](std::string_view field) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
      throw Error("bad clue count '" + std::string(field) + "' in '" + std::string(text) + "'");
    }
    return v;
  };
  std::vector<int> out;
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    std::size_t pos = 0;
    for (;;) {
      const auto comma = text.find(',', pos);
      out.push_back(number(text.substr(pos, comma == std::string_view::npos ? comma : comma - pos)));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    return out;
  }
  const int lo = number(text.substr(0, dots));
  std::string_view rest = text.substr(dots + 2);
  int step = 1;
  if (const auto colon = rest.find(':'); colon != std::string_view::npos) {
    step = number(rest.substr(colon + 1));
    rest = rest.substr(0, colon);
  }
  const int hi = number(rest);
  if (step < 1) throw Error("clue step must be positive");
  if (hi < lo) throw Error("empty clue range '" + std::string(text) + "'");
  for (int c = lo; c <= hi; c += step) out.push_back(c);
  return out;
}

void validate(const SweepConfig& config) {
  if (config.ensemble_size < 1) throw Error("ensemble size must be at least 1");
  if (config.clue_counts.empty()) throw Error("no clue counts given");
  for (int c : config.clue_counts) {
    if (c < 0 || c > config.spec.cell_count()) {
      throw Error("clue count " + std::to_string(c) + " outside 0.." +
                  std::to_string(config.spec.cell_count()));
    }
  }
  if (config.metrics.empty()) throw Error("no metrics selected");
  if (config.solution_cap && *config.solution_cap == 0) throw Error("solution cap must be positive");
  if (config.entropy_samples < 1) throw Error("entropy samples must be at least 1");
  if (config.threads < 0) throw Error("thread count must not be negative");
}

namespace {

struct InstanceResult {
  std::uint64_t backtracks = 0;
  std::uint64_t nodes = 0;
  std::uint64_t solution_count = 0;
  int backbone_size = 0;
  double backbone_fraction = 0.0;
  bool lp_integral = false;
  int lp_pivots = 0;
  double lp_residual = 0.0;
  std::optional<Grid> entropy_solution;
  double solution_entropy = 0.0;
  StrategyTrace trace;
  int empty_cells = 0;
};

bool wants(const SweepConfig& config, Metric m) {
  return std::find(config.metrics.begin(), config.metrics.end(), m) != config.metrics.end();
}

InstanceResult run_instance(const SweepConfig& config, int clue_count, std::uint64_t t) {
  const std::uint64_t master = config.master_seed;
  const Puzzle puzzle = generate_instance(config.spec, clue_count, master, t);
  InstanceResult r;
  r.empty_cells = puzzle.empty_count();
  SolverConfig solver = config.solver;
  solver.seed = derive_seed(master, {t, seed_stream::kExactSolver});
  solver.solution_cap.reset();

  if (wants(config, Metric::Hardness)) {
    const SolveResult solved = solve_one(puzzle, solver);
    if (!solved.satisfiable()) throw Error("generated puzzle has no solution");
    r.backtracks = solved.stats.backtracks;
    r.nodes = solved.stats.nodes;
    if (config.solution_cap) {
      r.solution_count = count_solutions(puzzle, *config.solution_cap, solver).count;
    }
  }
  if (wants(config, Metric::Backbone)) {
    const BackboneReport report = backbone_report(puzzle, solver);
    r.backbone_size = report.backbone_size;
    r.backbone_fraction = report.backbone_fraction;
  }
  if (wants(config, Metric::Lp)) {
    LpOptions options;
    options.eliminate_fixings = config.lp_eliminate_fixings;
    const LpSolution sol = solve_relaxation(build_ilp(puzzle), options);
    if (sol.status != LpStatus::Feasible) throw Error("relaxation of a satisfiable puzzle is infeasible");
    r.lp_integral = is_integral(sol);
    r.lp_pivots = sol.pivots;
    r.lp_residual = sol.max_residual;
  }
  if (wants(config, Metric::Entropy)) {
    SolverConfig cfg = config.solver;
    cfg.seed = derive_seed(master, {t, seed_stream::kEntropySolution});
    SolveResult solved = solve_one(puzzle, cfg);
    if (!solved.satisfiable()) throw Error("generated puzzle has no solution");
    r.entropy_solution = std::move(solved.solution);
    r.solution_entropy = solution_entropy(puzzle, config.entropy_samples,
                                          derive_seed(master, {t, seed_stream::kEntropySamples}),
                                          config.solver);
  }
  if (wants(config, Metric::Strategies)) {
    const auto res = strategy_solve(puzzle, derive_seed(master, {t, seed_stream::kStrategies}));
    if (!res.solution) throw Error("strategy solver found no solution");
    r.trace = res.trace;
  }
  return r;
}

// Runs body(i) for i in [0, count) on `threads` workers. The first
// exception is rethrown after all workers have stopped.
template <typename Body>
void parallel_for(std::size_t count, int threads, Body body) {
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  const auto n = static_cast<std::size_t>(std::max(1, threads));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (std::size_t k = 0; k < std::min(n, count); ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

template <typename Get>
Moments moments(const std::vector<InstanceResult>& results, Get get) {
  Moments m;
  const double n = static_cast<double>(results.size());
  for (const auto& r : results) m.mean += static_cast<double>(get(r));
  m.mean /= n;
  if (results.size() > 1) {
    double ss = 0.0;
    for (const auto& r : results) {
      const double d = static_cast<double>(get(r)) - m.mean;
      ss += d * d;
    }
    m.variance = ss / (n - 1.0);
  }
  return m;
}

class RowSink {
 public:
  RowSink(const SweepConfig& config, int clue_count, std::vector<SweepRow>& out)
      : config_(config), clue_count_(clue_count), out_(out) {}

  void add(std::string metric, std::string statistic, double value, std::size_t n) {
    SweepRow row;
    row.spec_id = config_.spec.id();
    row.side = config_.spec.side();
    row.variant = config_.spec.variant();
    row.clue_count = clue_count_;
    row.metric = std::move(metric);
    row.statistic = std::move(statistic);
    row.value = value;
    row.n_samples = n;
    row.master_seed = config_.master_seed;
    out_.push_back(std::move(row));
  }

  void add(const std::string& metric, const Moments& m, std::size_t n) {
    add(metric, "mean", m.mean, n);
    add(metric, "variance", m.variance, n);
  }

 private:
  const SweepConfig& config_;
  int clue_count_;
  std::vector<SweepRow>& out_;
};

void aggregate(const SweepConfig& config, int clue_count,
               const std::vector<InstanceResult>& results, std::vector<SweepRow>& out) {
  RowSink sink(config, clue_count, out);
  const std::size_t n = results.size();
  if (wants(config, Metric::Hardness)) {
    sink.add("backtracks", moments(results, [](const auto& r) { return r.backtracks; }), n);
    sink.add("nodes", moments(results, [](const auto& r) { return r.nodes; }), n);
    if (config.solution_cap) {
      sink.add("solution_count", moments(results, [](const auto& r) { return r.solution_count; }), n);
      sink.add("unique_solution", "mean",
               moments(results, [](const auto& r) { return r.solution_count == 1 ? 1 : 0; }).mean, n);
    }
  }
  if (wants(config, Metric::Backbone)) {
    sink.add("backbone_size", moments(results, [](const auto& r) { return r.backbone_size; }), n);
    sink.add("backbone_fraction",
             moments(results, [](const auto& r) { return r.backbone_fraction; }), n);
  }
  if (wants(config, Metric::Lp)) {
    sink.add("lp_integral", moments(results, [](const auto& r) { return r.lp_integral ? 1 : 0; }), n);
    sink.add("lp_pivots", "mean", moments(results, [](const auto& r) { return r.lp_pivots; }).mean, n);
    double worst = 0.0;
    for (const auto& r : results) worst = std::max(worst, r.lp_residual);
    sink.add("lp_max_residual", "max", worst, n);
  }
  if (wants(config, Metric::Entropy)) {
    std::vector<Grid> solutions;
    solutions.reserve(n);
    for (const auto& r : results) solutions.push_back(*r.entropy_solution);
    sink.add("entropy", "value", shannon_entropy(singular_values(mean_matrix(solutions).mean)), n);
    sink.add("solution_entropy", moments(results, [](const auto& r) { return r.solution_entropy; }), n);
  }
  if (wants(config, Metric::Strategies)) {
    std::vector<StrategyTrace> traces;
    std::vector<int> empties;
    traces.reserve(n);
    empties.reserve(n);
    for (const auto& r : results) {
      traces.push_back(r.trace);
      empties.push_back(r.empty_cells);
    }
    const StrategyProfile p = profile_traces(traces, empties);
    for (Strategy s : kAllStrategies) {
      const std::string name = "strategy_" + std::string(strategy_name(s));
      sink.add(name, "frequency", p.frequency[static_cast<int>(s)], n);
      sink.add(name, "mean_count", p.mean_count[static_cast<int>(s)], n);
    }
    sink.add("distinct_strategies", Moments{p.distinct_mean, p.distinct_variance}, n);
    sink.add("singles_per_empty", "mean", p.singles_per_empty, n);
    sink.add("guesses_per_empty", "mean", p.guesses_per_empty, n);
  }
}

void write_atomically(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot move " + tmp.string() + " to " + path.string());
  }
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  validate(config);
  int threads = config.threads;
  if (threads == 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<SweepRow> rows;
  const bool keep_grids = !config.solutions_out.empty() && wants(config, Metric::Entropy);
  std::string grids = "# clue_count instance solution\n";
  const auto size = static_cast<std::size_t>(config.ensemble_size);
  for (std::size_t k = 0; k < config.clue_counts.size(); ++k) {
    const int clues = config.clue_counts[k];
    std::vector<InstanceResult> results(size);
    parallel_for(size, threads, [&](std::size_t t) {
      const auto where = [&] {
        return config.spec.id() + ", " + std::to_string(clues) + " clues, instance " +
               std::to_string(t) + ": ";
      };
      try {
        results[t] = run_instance(config, clues, t);
      } catch (const NumericalFailure& e) {
        throw NumericalFailure(where() + e.what());
      } catch (const std::exception& e) {
        throw InstanceFailure(where() + e.what());
      }
    });
    aggregate(config, clues, results, rows);
    if (keep_grids) {
      for (std::size_t t = 0; t < size; ++t) {
        grids += std::to_string(clues) + ' ' + std::to_string(t) + ' ' +
                 serialize_grid(*results[t].entropy_solution) + '\n';
      }
    }
    if (config.progress) config.progress(k + 1, config.clue_counts.size());
  }
  if (keep_grids) write_atomically(config.solutions_out, grids);
  return rows;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error("cannot format value");
  return std::string(buf, ptr);
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    const auto next = line.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
}

template <typename T>
T parse_number(std::string_view field, int line) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw CsvError("line " + std::to_string(line) + ": bad number '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::string format_csv(const std::vector<SweepRow>& rows, std::string_view timestamp) {
  std::string out = "# generated " + std::string(timestamp) + "\n";
  out += kCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += r.spec_id + ',' + std::to_string(r.side) + ',' + std::string(variant_name(r.variant)) +
           ',' + std::to_string(r.clue_count) + ',' + r.metric + ',' + r.statistic + ',' +
           format_double(r.value) + ',' + std::to_string(r.n_samples) + ',' +
           std::to_string(r.master_seed) + '\n';
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  write_atomically(path, format_csv(rows, utc_timestamp()));
}

std::vector<SweepRow> parse_csv(std::string_view text) {
  std::vector<SweepRow> rows;
  bool header_seen = false;
  int number = 0;
  for (std::string_view line : split(text, '\n')) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kCsvHeader) throw CsvError("line " + std::to_string(number) + ": unexpected header");
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 9) {
      throw CsvError("line " + std::to_string(number) + ": expected 9 fields, found " +
                     std::to_string(f.size()));
    }
    SweepRow r;
    r.spec_id = std::string(f[0]);
    r.side = parse_number<int>(f[1], number);
    try {
      r.variant = parse_variant(f[2]);
    } catch (const Error& e) {
      throw CsvError("line " + std::to_string(number) + ": " + e.what());
    }
    r.clue_count = parse_number<int>(f[3], number);
    r.metric = std::string(f[4]);
    r.statistic = std::string(f[5]);
    r.value = parse_number<double>(f[6], number);
    r.n_samples = parse_number<std::size_t>(f[7], number);
    r.master_seed = parse_number<std::uint64_t>(f[8], number);
    rows.push_back(std::move(r));
  }
  if (!header_seen) throw CsvError("missing header line");
  return rows;
}

std::vector<SweepRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::vector<std::pair<int, double>> series(const std::vector<SweepRow>& rows,
                                           std::string_view metric, std::string_view statistic) {
  std::vector<std::pair<int, double>> out;
  const std::string* spec_id = nullptr;
  for (const auto& r : rows) {
    if (r.metric != metric || r.statistic != statistic) continue;
    if (spec_id && *spec_id != r.spec_id) throw Error("rows mix boards " + *spec_id + " and " + r.spec_id);
    spec_id = &r.spec_id;
    out.emplace_back(r.clue_count, r.value);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

double critical_point(const std::vector<SweepRow>& rows, std::string_view metric,
                      std::string_view statistic, CriticalKind kind) {
  const auto pts = series(rows, metric, statistic);
  if (pts.empty()) {
    throw Error("no rows for " + std::string(metric) + "/" + std::string(statistic));
  }
  if (pts.size() >= 2) {
    const int step = pts[1].first - pts[0].first;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (step <= 0 || pts[i].first - pts[i - 1].first != step) {
        throw Error("clue counts of " + std::string(metric) + " are not contiguous");
      }
    }
  }
  if (kind == CriticalKind::Auto) {
    const bool sigmoid = metric == "backbone_fraction" || metric == "lp_integral" ||
                         metric == "strategy_guess";
    kind = sigmoid ? CriticalKind::Crossing : CriticalKind::Peak;
  }
  if (kind == CriticalKind::Peak) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (pts[i].second > pts[best].second) best = i;
    }
    return pts[best].first;
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double a = pts[i].second - 0.5;
    if (a == 0.0) return pts[i].first;
    if (i + 1 == pts.size()) break;
    const double b = pts[i + 1].second - 0.5;
    if ((a < 0.0) != (b < 0.0) && b != 0.0) {
      const double frac = a / (a - b);
      return pts[i].first + frac * (pts[i + 1].first - pts[i].first);
    }
  }
  throw Error(std::string(metric) + " never crosses 0.5");
}

}  // namespace sudocrit
