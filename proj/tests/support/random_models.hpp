#pragma once

#include <random>

#include "mvrobust/model.hpp"

namespace mvrobust::testsupport {

// Small random workloads: two relations with up to three attributes, up to
// three templates with up to four operations each. Sized so that bound-3
// counterexample search is exhaustive enough to cross-check the checker.
Model random_model(std::mt19937_64& rng);

Allocation random_allocation(std::mt19937_64& rng, const Model& m);

// A random allocation pointwise >= the given one.
Allocation random_raise(std::mt19937_64& rng, const Allocation& a);

}  // namespace mvrobust::testsupport
