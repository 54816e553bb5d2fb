#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sudocrit/grid.hpp"

namespace sudocrit {

/// Seed paths below a master seed. Instance t of an ensemble uses
/// derive_seed(master, {t, stream}); the grid itself uses {t}.
namespace seed_stream {
inline constexpr std::uint64_t kPuncture = 1;
inline constexpr std::uint64_t kExactSolver = 2;
inline constexpr std::uint64_t kStrategies = 3;
inline constexpr std::uint64_t kEntropySolution = 4;
inline constexpr std::uint64_t kEntropySamples = 5;
}  // namespace seed_stream

/// Instance t is random_complete_grid(spec, derive_seed(master, {t}))
/// punctured to `clue_count` with derive_seed(master, {t, 1}). The same t
/// therefore shares its grid across clue counts, and its clue sets are
/// nested.
std::vector<Puzzle> generate_ensemble(const BoardSpec& spec, int clue_count, int size,
                                      std::uint64_t master_seed);

/// Single instance of generate_ensemble.
Puzzle generate_instance(const BoardSpec& spec, int clue_count, std::uint64_t master_seed,
                         std::uint64_t t);

struct IngestError {
  int line = 0;  // 1-based
  std::string message;
};

struct IngestResult {
  std::vector<Puzzle> puzzles;
  std::vector<IngestError> errors;
  /// Clue count -> number of puzzles.
  std::map<int, int> clue_histogram;
};

class IngestFailure : public Error {
 public:
  using Error::Error;
};

/// Reads one puzzle per line in the parse_puzzle format. Blank lines and
/// lines starting with '#' are skipped. Bad lines are reported, not fatal;
/// a file that yields no puzzle at all (or cannot be read) throws
/// IngestFailure.
IngestResult ingest_dataset(const std::filesystem::path& path, const BoardSpec& spec);

}  // namespace sudocrit
