#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sudocrit/grid.hpp"

namespace sudocrit {

enum class Propagation { Stable, Contradiction };

/// Deductions performed by CandidateState::propagate().
enum class PropagationLevel {
  /// A cell left with one candidate is assigned it.
  NakedSingles,
  /// Additionally, a value with one remaining place in a unit is assigned
  /// there, and a unit with a value that has no place is a contradiction.
  HiddenSingles,
  /// Additionally, every unit is kept domain consistent as an alldifferent
  /// constraint: a candidate survives only if some perfect cell/value
  /// matching of its unit uses it.
  AllDifferent,
};

/// Per-cell candidate sets over a shared topology.
///
/// Two ways of making progress are supported. The exact solver uses
/// assign() followed by propagate(), which cascades naked singles to a
/// fixpoint. The strategy solver uses place() and remove(), which only touch
/// the cells named and leave every further deduction to explicit strategies.
///
/// Invariants: an assigned cell holds a singleton candidate set. After
/// propagate() returns Stable, or after every successful place(), no cell
/// lists a value already assigned to one of its neighbors.
class CandidateState {
 public:
  /// All candidate sets full, nothing assigned.
  explicit CandidateState(std::shared_ptr<const Topology> topology);
  /// Clues are queued for propagation but not yet propagated.
  explicit CandidateState(const Puzzle& puzzle);

  const Topology& topology() const { return *topology_; }
  int side() const { return topology_->side(); }
  int cell_count() const { return topology_->cell_count(); }

  ValueMask candidates(int cell) const { return masks_[cell]; }
  std::span<const ValueMask> candidates() const { return masks_; }
  /// Assigned value, or 0.
  int value(int cell) const { return values_[cell]; }
  bool is_assigned(int cell) const { return values_[cell] != 0; }
  int assigned_count() const { return assigned_; }
  bool is_complete() const { return assigned_ == cell_count(); }

  /// Tentatively fixes a cell and queues it for propagate(). Returns false
  /// if the value is not a candidate.
  bool assign(int cell, int value);
  /// Removes assigned values from neighbors and assigns every cell left with
  /// one candidate, until nothing changes.
  Propagation propagate(PropagationLevel level = PropagationLevel::NakedSingles);

  /// Assigns a cell and removes the value from its neighbors, without
  /// cascading. Returns false on a contradiction (value not a candidate, or
  /// a neighbor left without candidates).
  bool place(int cell, int value);
  /// Strikes a candidate. Returns false if the cell is left empty.
  bool remove(int cell, int value);
  /// Restricts a cell to `keep`. Returns false if nothing is left.
  bool restrict_to(int cell, ValueMask keep);

  /// Assigned values as a grid (0 where unassigned).
  Grid to_grid() const;

 private:
  Propagation propagate_naked();
  // One pass over all units; 1 if something was assigned, -1 on contradiction.
  int hidden_single_pass();
  // Matching-based filtering of every unit; same return convention.
  int alldifferent_pass();

  std::shared_ptr<const Topology> topology_;
  std::vector<ValueMask> masks_;
  std::vector<std::uint8_t> values_;
  std::vector<int> pending_;
  int assigned_ = 0;
};

}  // namespace sudocrit
