#include "sudocrit/backbone.hpp"

namespace sudocrit {

namespace {

CandidateState propagated_root(const Puzzle& puzzle, const SolverConfig& probe) {
  CandidateState root(puzzle);
  if (root.propagate(probe.propagation) == Propagation::Contradiction) {
    throw UnsatisfiableInput("puzzle has no solution");
  }
  return root;
}

void mark(std::vector<ValueMask>& supported, const Grid& solution) {
  for (int cell = 0; cell < solution.size(); ++cell) supported[cell] |= value_bit(solution[cell]);
}

}  // namespace

ValueMask cell_support(const Puzzle& puzzle, int cell, const SolverConfig& probe) {
  if (cell < 0 || cell >= puzzle.grid().size()) throw Error("cell index out of range");
  if (puzzle.is_clue(cell)) throw Error("cell " + std::to_string(cell) + " is a clue");
  const CandidateState root = propagated_root(puzzle, probe);
  auto first = solve_from(root, probe);
  if (!first.solution) throw UnsatisfiableInput("puzzle has no solution");
  ValueMask support = value_bit((*first.solution)[cell]);
  for (ValueMask m = root.candidates(cell) & ~support; m != 0; m &= m - 1) {
    const int value = lowest_value(m);
    CandidateState child = root;
    child.assign(cell, value);
    if (solve_from(std::move(child), probe).solution) support |= value_bit(value);
  }
  return support;
}

BackboneReport backbone_report(const Puzzle& puzzle, const SolverConfig& probe) {
  const CandidateState root = propagated_root(puzzle, probe);
  auto first = solve_from(root, probe);
  if (!first.solution) throw UnsatisfiableInput("puzzle has no solution");

  const int cells = puzzle.grid().size();
  std::vector<ValueMask> supported(static_cast<std::size_t>(cells), 0);
  mark(supported, *first.solution);

  BackboneReport report;
  for (int cell = 0; cell < cells; ++cell) {
    if (puzzle.is_clue(cell)) continue;
    ++report.empty_count;
    for (ValueMask m = root.candidates(cell) & ~supported[cell];
         m != 0 && mask_size(supported[cell]) < 2; m &= m - 1) {
      CandidateState child = root;
      child.assign(cell, lowest_value(m));
      auto witness = solve_from(std::move(child), probe);
      if (witness.solution) mark(supported, *witness.solution);
    }
    if (mask_size(supported[cell]) == 1) report.frozen_cells.push_back(cell);
  }
  report.backbone_size = static_cast<int>(report.frozen_cells.size());
  report.backbone_fraction =
      report.empty_count == 0 ? 1.0
                              : static_cast<double>(report.backbone_size) / report.empty_count;
  return report;
}

}  // namespace sudocrit
