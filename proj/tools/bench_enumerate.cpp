// Benchmark: branch-parallel enumeration kernel vs the serial reference
// implementation, verifying identical output while timing both.
#include <chrono>
#include <cstring>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "rotsteiner/registry.hpp"
#include "rotsteiner/search.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace rotsteiner;
using clk = std::chrono::steady_clock;

namespace {

double run_ms(const CayleyTable& g, int k, int threads, bool serial,
              std::vector<BaseFamily>* out) {
  SearchOptions opts;
  opts.thread_count = threads;
  const auto t0 = clk::now();
  EnumerateResult res = serial ? enumerate_families_serial(g, k, opts) : enumerate_families(g, k, opts);
  const auto t1 = clk::now();
  if (out) *out = std::move(res.families);
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  bool heavy = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--heavy") == 0) {
      heavy = true;
    } else {
      std::cout << "usage: bench_enumerate [--heavy]\n";
      return std::strcmp(argv[i], "--help") == 0 ? 0 : 1;
    }
  }

  struct Case {
    const char* group;
    int k;
  };
  std::vector<Case> cases = {{"C6xC3", 3}, {"SL(2,3)", 3}, {"He3", 4}};
  if (heavy) cases.push_back({"C64", 5});

  int hw = 1;
#ifdef _OPENMP
  hw = omp_get_max_threads();
#endif
  std::vector<int> thread_counts = {1, 2, 4};
  if (hw > 4) thread_counts.push_back(hw);

  std::cout << std::left << std::setw(12) << "GROUP" << std::setw(4) << "K" << std::setw(10)
            << "FAMILIES" << std::setw(12) << "SERIAL(MS)";
  for (int t : thread_counts) std::cout << std::setw(12) << ("PAR" + std::to_string(t) + "(MS)");
  std::cout << std::setw(10) << "SPEEDUP" << "\n";

  bool all_equal = true;
  for (const Case& c : cases) {
    const ResolvedGroup rg = resolve_group(c.group);
    std::vector<BaseFamily> ref;
    const double serial_ms = run_ms(rg.table, c.k, 1, /*serial=*/true, &ref);

    std::cout << std::left << std::setw(12) << c.group << std::setw(4) << c.k << std::setw(10)
              << ref.size() << std::setw(12) << std::fixed << std::setprecision(1) << serial_ms;

    double best_ms = serial_ms;
    for (int t : thread_counts) {
      std::vector<BaseFamily> got;
      const double ms = run_ms(rg.table, c.k, t, /*serial=*/false, &got);
      if (got != ref) {
        all_equal = false;
        std::cout << std::setw(12) << "MISMATCH";
      } else {
        std::cout << std::setw(12) << ms;
      }
      if (ms < best_ms) best_ms = ms;
    }
    std::cout << std::setw(10) << std::setprecision(2) << (serial_ms / best_ms) << "\n";
  }

  if (!all_equal) {
    std::cout << "FAILURE: parallel kernel and serial reference disagree\n";
    return 1;
  }
  std::cout << "all parallel results identical to the serial reference\n";
  return 0;
}
