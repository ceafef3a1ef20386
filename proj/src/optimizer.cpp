#include "mvrobust/optimizer.hpp"

#include <numeric>
#include <vector>

namespace mvrobust {

Allocation lowest_allocation(const Model& m, RunMode mode,
                             std::span<const int> order) {
  int n = static_cast<int>(m.templates().size());
  std::vector<int> default_order;
  if (order.empty()) {
    default_order.resize(n);
    std::iota(default_order.begin(), default_order.end(), 0);
    order = default_order;
  }
  std::vector<bool> seen(n, false);
  for (int t : order) {
    if (t < 0 || t >= n || seen[t])
      throw std::invalid_argument("iteration order is not a permutation");
    seen[t] = true;
  }
  if (static_cast<int>(order.size()) != n)
    throw std::invalid_argument("iteration order is not a permutation");

  auto alloc = Allocation::uniform(m, IsolationLevel::SSI);
  for (int t : order) {
    Allocation candidate = alloc;
    candidate.set(t, IsolationLevel::RC);
    if (is_robust(m, candidate, mode).robust) {
      alloc = candidate;
      continue;
    }
    candidate.set(t, IsolationLevel::SI);
    if (is_robust(m, candidate, mode).robust) alloc = candidate;
  }
  return alloc;
}

bool is_lowest(const Model& m, const Allocation& alloc, RunMode mode) {
  if (!is_robust(m, alloc, mode).robust)
    throw NotRobustInput("is_lowest requires a robust allocation");
  static constexpr IsolationLevel kLevels[] = {
      IsolationLevel::RC, IsolationLevel::SI, IsolationLevel::SSI};
  for (int t = 0; t < static_cast<int>(m.templates().size()); ++t)
    for (IsolationLevel lower : kLevels) {
      if (!(lower < alloc[t])) continue;
      Allocation candidate = alloc;
      candidate.set(t, lower);
      if (is_robust(m, candidate, mode).robust) return false;
    }
  return true;
}

}  // namespace mvrobust
