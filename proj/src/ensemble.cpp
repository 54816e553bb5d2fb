#include "sudocrit/ensemble.hpp"

#include <fstream>

#include "sudocrit/exact_solver.hpp"
#include "sudocrit/random.hpp"

namespace sudocrit {

Puzzle generate_instance(const BoardSpec& spec, int clue_count, std::uint64_t master_seed,
                         std::uint64_t t) {
  const Grid grid = random_complete_grid(spec, derive_seed(master_seed, {t}));
  return puncture(grid, clue_count, derive_seed(master_seed, {t, seed_stream::kPuncture}));
}

std::vector<Puzzle> generate_ensemble(const BoardSpec& spec, int clue_count, int size,
                                      std::uint64_t master_seed) {
  if (size < 1) throw Error("ensemble size must be at least 1");
  if (clue_count < 0 || clue_count > spec.cell_count()) {
    throw Error("clue count " + std::to_string(clue_count) + " outside 0.." +
                std::to_string(spec.cell_count()));
  }
  std::vector<Puzzle> out;
  out.reserve(static_cast<std::size_t>(size));
  for (int t = 0; t < size; ++t) {
    out.push_back(generate_instance(spec, clue_count, master_seed, static_cast<std::uint64_t>(t)));
  }
  return out;
}

IngestResult ingest_dataset(const std::filesystem::path& path, const BoardSpec& spec) {
  std::ifstream in(path);
  if (!in) throw IngestFailure("cannot open " + path.string());
  IngestResult result;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      Puzzle p = parse_puzzle(line, spec);
      ++result.clue_histogram[p.clue_count()];
      result.puzzles.push_back(std::move(p));
    } catch (const Error& e) {
      result.errors.push_back({number, e.what()});
    }
  }
  if (result.puzzles.empty()) {
    std::string msg = "no puzzle could be read from " + path.string();
    if (!result.errors.empty()) {
      msg += " (" + std::to_string(result.errors.size()) + " bad lines, first at line " +
             std::to_string(result.errors.front().line) + ": " + result.errors.front().message + ")";
    }
    throw IngestFailure(msg);
  }
  return result;
}

}  // namespace sudocrit
