#include "sudocrit/candidates.hpp"

#include <array>

namespace sudocrit {

CandidateState::CandidateState(std::shared_ptr<const Topology> topology)
    : topology_(std::move(topology)),
      masks_(static_cast<std::size_t>(topology_->cell_count()), full_mask(topology_->side())),
      values_(static_cast<std::size_t>(topology_->cell_count()), 0) {}

CandidateState::CandidateState(const Puzzle& puzzle)
    : CandidateState(Topology::of(puzzle.spec())) {
  const auto& g = puzzle.grid();
  for (int cell = 0; cell < g.size(); ++cell) {
    if (g[cell] != 0) assign(cell, g[cell]);
  }
}

bool CandidateState::assign(int cell, int value) {
  const ValueMask bit = value_bit(value);
  if ((masks_[cell] & bit) == 0) return false;
  if (values_[cell] != 0) return values_[cell] == value;
  masks_[cell] = bit;
  values_[cell] = static_cast<std::uint8_t>(value);
  ++assigned_;
  pending_.push_back(cell);
  return true;
}

Propagation CandidateState::propagate(PropagationLevel level) {
  for (;;) {
    if (propagate_naked() == Propagation::Contradiction) return Propagation::Contradiction;
    if (level == PropagationLevel::NakedSingles) return Propagation::Stable;
    const int pass =
        level == PropagationLevel::HiddenSingles ? hidden_single_pass() : alldifferent_pass();
    if (pass < 0) {
      pending_.clear();
      return Propagation::Contradiction;
    }
    if (pass == 0) return Propagation::Stable;
  }
}

int CandidateState::hidden_single_pass() {
  const ValueMask all = full_mask(side());
  int changed = 0;
  for (const auto& unit : topology_->units()) {
    ValueMask once = 0;
    ValueMask twice = 0;
    ValueMask placed = 0;
    for (int cell : unit) {
      const ValueMask m = masks_[cell];
      if (values_[cell] != 0) placed |= m;
      twice |= once & m;
      once |= m;
    }
    if (once != all) return -1;
    ValueMask lone = once & ~twice & ~placed;
    while (lone != 0) {
      const int value = lowest_value(lone);
      lone &= lone - 1;
      for (int cell : unit) {
        if (masks_[cell] & value_bit(value)) {
          // An earlier assignment in this pass may have claimed the cell.
          if (values_[cell] != 0 || !assign(cell, value)) return -1;
          ++changed;
          break;
        }
      }
    }
  }
  return changed > 0 ? 1 : 0;
}

namespace {

// Perfect matching and SCC filtering for one alldifferent unit of `n` cells
// over `n` values. Domains are indexed by position within the unit.
class UnitMatcher {
 public:
  explicit UnitMatcher(int n) : n_(n) {}

  // Returns false if no perfect matching exists.
  bool match(const std::array<ValueMask, 32>& dom) {
    cell_to_value_.fill(-1);
    value_to_cell_.fill(-1);
    for (int c = 0; c < n_; ++c) {
      ValueMask seen = 0;
      if (!augment(dom, c, seen)) return false;
    }
    return true;
  }

  // Removes every candidate outside all perfect matchings. Requires match().
  void filter(std::array<ValueMask, 32>& dom) {
    // Cell graph: c -> d when c could take the value currently matched to d.
    for (int c = 0; c < n_; ++c) {
      std::uint32_t out = 0;
      for (ValueMask m = dom[c]; m != 0; m &= m - 1) {
        const int d = value_to_cell_[std::countr_zero(m)];
        if (d != c) out |= std::uint32_t{1} << d;
      }
      adj_[c] = out;
    }
    tarjan();
    for (int c = 0; c < n_; ++c) {
      ValueMask keep = 0;
      for (ValueMask m = dom[c]; m != 0; m &= m - 1) {
        const int v = std::countr_zero(m);
        const int d = value_to_cell_[v];
        if (d == c || comp_[d] == comp_[c]) keep |= ValueMask{1} << v;
      }
      dom[c] = keep;
    }
  }

 private:
  bool augment(const std::array<ValueMask, 32>& dom, int c, ValueMask& seen) {
    for (ValueMask m = dom[c] & ~seen; m != 0; m &= m - 1) {
      const int v = std::countr_zero(m);
      if (seen & (ValueMask{1} << v)) continue;
      seen |= ValueMask{1} << v;
      if (value_to_cell_[v] < 0 || augment(dom, value_to_cell_[v], seen)) {
        cell_to_value_[c] = v;
        value_to_cell_[v] = c;
        return true;
      }
    }
    return false;
  }

  void tarjan() {
    index_.fill(-1);
    counter_ = 0;
    comps_ = 0;
    stack_size_ = 0;
    on_stack_ = 0;
    for (int c = 0; c < n_; ++c) {
      if (index_[c] < 0) strongconnect(c);
    }
  }

  void strongconnect(int c) {
    index_[c] = low_[c] = counter_++;
    stack_[stack_size_++] = c;
    on_stack_ |= std::uint32_t{1} << c;
    for (std::uint32_t out = adj_[c]; out != 0; out &= out - 1) {
      const int d = std::countr_zero(out);
      if (index_[d] < 0) {
        strongconnect(d);
        low_[c] = std::min(low_[c], low_[d]);
      } else if (on_stack_ & (std::uint32_t{1} << d)) {
        low_[c] = std::min(low_[c], index_[d]);
      }
    }
    if (low_[c] == index_[c]) {
      int d;
      do {
        d = stack_[--stack_size_];
        on_stack_ &= ~(std::uint32_t{1} << d);
        comp_[d] = comps_;
      } while (d != c);
      ++comps_;
    }
  }

  int n_;
  std::array<int, 32> cell_to_value_{};
  std::array<int, 32> value_to_cell_{};
  std::array<std::uint32_t, 32> adj_{};
  std::array<int, 32> index_{};
  std::array<int, 32> low_{};
  std::array<int, 32> comp_{};
  std::array<int, 32> stack_{};
  int stack_size_ = 0;
  std::uint32_t on_stack_ = 0;
  int counter_ = 0;
  int comps_ = 0;
};

}  // namespace

int CandidateState::alldifferent_pass() {
  UnitMatcher matcher(side());
  std::array<ValueMask, 32> dom{};
  int changed = 0;
  for (const auto& unit : topology_->units()) {
    const int n = static_cast<int>(unit.size());
    for (int i = 0; i < n; ++i) dom[i] = masks_[unit[i]];
    if (!matcher.match(dom)) return -1;
    matcher.filter(dom);
    for (int i = 0; i < n; ++i) {
      const int cell = unit[i];
      if (dom[i] == masks_[cell]) continue;
      masks_[cell] = dom[i];
      ++changed;
      if (values_[cell] == 0 && (dom[i] & (dom[i] - 1)) == 0) {
        values_[cell] = static_cast<std::uint8_t>(lowest_value(dom[i]));
        ++assigned_;
        pending_.push_back(cell);
      }
    }
  }
  return changed > 0 ? 1 : 0;
}

Propagation CandidateState::propagate_naked() {
  while (!pending_.empty()) {
    const int cell = pending_.back();
    pending_.pop_back();
    const ValueMask bit = value_bit(values_[cell]);
    for (int nb : topology_->neighbors(cell)) {
      ValueMask& m = masks_[nb];
      if ((m & bit) == 0) continue;
      m &= ~bit;
      if (m == 0) {
        pending_.clear();
        return Propagation::Contradiction;
      }
      if (values_[nb] == 0 && (m & (m - 1)) == 0) {
        values_[nb] = static_cast<std::uint8_t>(lowest_value(m));
        ++assigned_;
        pending_.push_back(nb);
      }
    }
  }
  return Propagation::Stable;
}

bool CandidateState::place(int cell, int value) {
  const ValueMask bit = value_bit(value);
  if ((masks_[cell] & bit) == 0) return false;
  if (values_[cell] == 0) {
    values_[cell] = static_cast<std::uint8_t>(value);
    ++assigned_;
  }
  masks_[cell] = bit;
  bool ok = true;
  for (int nb : topology_->neighbors(cell)) {
    masks_[nb] &= ~bit;
    if (masks_[nb] == 0) ok = false;
  }
  return ok;
}

bool CandidateState::remove(int cell, int value) {
  masks_[cell] &= ~value_bit(value);
  return masks_[cell] != 0;
}

bool CandidateState::restrict_to(int cell, ValueMask keep) {
  masks_[cell] &= keep;
  return masks_[cell] != 0;
}

Grid CandidateState::to_grid() const {
  Grid g(topology_->spec());
  for (int cell = 0; cell < cell_count(); ++cell) g.set(cell, values_[cell]);
  return g;
}

}  // namespace sudocrit
