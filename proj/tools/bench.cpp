// Compares the serial reference implementation against the OpenMP kernels
// on the bundled SmallBank workload: robustness checks, lowest-allocation
// computation, the full promotion exploration and the bounded oracle search.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mvrobust/checker.hpp"
#include "mvrobust/dsl.hpp"
#include "mvrobust/optimizer.hpp"
#include "mvrobust/oracle.hpp"
#include "mvrobust/promotion.hpp"

using namespace mvrobust;

namespace {

double time_ms(const std::function<void()>& fn, int iters) {
  auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < iters; ++i) fn();
  auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() /
         iters;
}

void row(const char* name, const std::function<void(RunMode)>& fn, int iters) {
  double serial = time_ms([&] { fn(RunMode::Serial); }, iters);
  double parallel = time_ms([&] { fn(RunMode::Parallel); }, iters);
  std::printf("%-28s %10.2f ms %10.2f ms %8.2fx\n", name, serial, parallel,
              serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  std::string path = argc > 1 ? argv[1] : "resources/smallbank.tdsl";
  int iters = argc > 2 ? std::atoi(argv[2]) : 3;

  Model m = load_model_file(path);
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; parallel mode falls back to serial\n");
#endif
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel",
              "speedup");

  Allocation all_ssi = Allocation::uniform(m, IsolationLevel::SSI);
  Allocation mixed = parse_allocation(m, "Balance=RC");
  for (int t = 0; t < static_cast<int>(m.templates().size()); ++t)
    if (m.templates()[t].name != "Balance") mixed.set(t, IsolationLevel::SI);

  row("is_robust (robust case)",
      [&](RunMode mode) { (void)is_robust(m, all_ssi, mode); }, iters);
  row("is_robust (counterexample)",
      [&](RunMode mode) { (void)is_robust(m, mixed, mode); }, iters);
  row("lowest_allocation",
      [&](RunMode mode) { (void)lowest_allocation(m, mode); }, iters);
  row("promotion exploration",
      [&](RunMode mode) { (void)explore(m, mode); }, iters);
  row("oracle search (bound 3)",
      [&](RunMode mode) {
        (void)bounded_counterexample_search(m, mixed, 3, mode);
      },
      iters);
  return 0;
}
