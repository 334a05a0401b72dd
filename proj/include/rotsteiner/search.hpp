#pragma once

#include <optional>
#include <vector>

#include "rotsteiner/family.hpp"
#include "rotsteiner/group.hpp"

namespace rotsteiner {

struct SearchOptions {
  // Restrict output to families fixed (up to translation and block order)
  // by this automorphism. Must be an automorphism of the search group.
  std::optional<Automorphism> prescribed_multiplier;

  // Stop after collecting this many families; the result is then flagged
  // incomplete. Unset means exhaustive.
  std::optional<long long> max_solutions;

  // Worker threads for the branch-parallel search. Values < 1 mean "use the
  // OpenMP default". Output is identical for every thread count.
  int thread_count = 1;

  // Wall-clock budget; on expiry the result carries what was found so far
  // and is flagged incomplete.
  std::optional<double> timeout_seconds;
};

enum class SearchStatus {
  Complete,      // search space exhausted
  NoSubgroup,    // no subgroup of order k-1 exists; zero families, complete
  Truncated,     // max_solutions reached
  TimedOut,      // timeout_seconds expired
};

struct EnumerateResult {
  std::vector<BaseFamily> families;  // canonical forms, sorted by family_key
  SearchStatus status = SearchStatus::Complete;
  bool complete = true;
  long long nodes = 0;  // search-tree nodes visited (diagnostic)
};

// Enumerates all difference families with block size k over g whose
// development is a Steiner system S(2, k, |G|+1): one block is a subgroup
// of order k-1 extended by the fixed point, and the remaining blocks cover
// every nonidentity difference exactly once, counting multiplicity over the
// block stabilizer. Families are emitted once each, in canonical form, in
// canonical order. Requires k >= 3.
//
// The search seeds one branch per (order-(k-1) subgroup, first block)
// pair and explores branches in parallel with OpenMP; results are merged
// in branch order, so output does not depend on thread count.
EnumerateResult enumerate_families(const CayleyTable& g, int k,
                                   const SearchOptions& opts = {});

// Single-threaded reference enumerator kept deliberately simple: no
// incremental difference bookkeeping, every candidate block re-checked from
// scratch. Used by tests and the benchmark as the trusted baseline.
EnumerateResult enumerate_families_serial(const CayleyTable& g, int k,
                                          const SearchOptions& opts = {});

}  // namespace rotsteiner
