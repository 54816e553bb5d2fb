#pragma once

#include <vector>

#include "sudocrit/exact_solver.hpp"
#include "sudocrit/grid.hpp"

namespace sudocrit {

class UnsatisfiableInput : public Error {
 public:
  using Error::Error;
};

struct BackboneReport {
  /// Empty cells that take the same value in every solution, ascending.
  std::vector<int> frozen_cells;
  int empty_count = 0;
  int backbone_size = 0;
  /// backbone_size / empty_count; 1.0 when the puzzle has no empty cell.
  double backbone_fraction = 1.0;
};

/// Values an empty cell takes in at least one solution, as a mask. One
/// satisfiability probe per surviving candidate value. Throws
/// UnsatisfiableInput when the puzzle has no solution.
ValueMask cell_support(const Puzzle& puzzle, int cell, const SolverConfig& probe = {});

/// Frozen cells of a satisfiable puzzle. Each solution found while probing
/// marks its values as supported everywhere, so a cell stops being probed as
/// soon as two values are known to be supported.
BackboneReport backbone_report(const Puzzle& puzzle, const SolverConfig& probe = {});

}  // namespace sudocrit
