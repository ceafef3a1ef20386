#pragma once

#include <span>
#include <stdexcept>

#include "mvrobust/checker.hpp"
#include "mvrobust/model.hpp"

namespace mvrobust {

struct NotRobustInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Computes the unique lowest robust allocation: starting from all-SSI, each
// template in turn keeps the lowest of RC, SI, SSI that preserves
// robustness. The result is independent of the iteration order; `order`
// (a permutation of template indices) exists to assert exactly that.
Allocation lowest_allocation(const Model& m, RunMode mode = RunMode::Parallel,
                             std::span<const int> order = {});

// True iff no single-template lowering (by one or two steps) of a robust
// allocation stays robust. Throws NotRobustInput when the given allocation
// is itself not robust.
bool is_lowest(const Model& m, const Allocation& alloc,
               RunMode mode = RunMode::Parallel);

}  // namespace mvrobust
