#include "rotsteiner/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <numeric>
#include <stdexcept>

#include "rotsteiner/design.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rotsteiner {

namespace {

using Clock = std::chrono::steady_clock;

struct SearchShared {
  const CayleyTable* g = nullptr;
  int n = 0;
  int k = 0;
  int max_stab = 1;
  std::vector<char> stab_allowed;  // indexed by stabilizer order, size k+1
  std::optional<Automorphism> multiplier;
  std::optional<Clock::time_point> deadline;
  long long max_solutions = -1;  // < 0: unbounded

  std::atomic<bool> stop{false};
  std::atomic<long long> emitted{0};
  std::atomic<long long> nodes{0};

  bool hit_deadline() {
    if (!deadline) return false;
    if (Clock::now() >= *deadline) {
      stop.store(true, std::memory_order_relaxed);
      return true;
    }
    return false;
  }
};

// Mutable per-branch search state. Blocks under construction keep their
// difference multiplicities in `mult`; completed blocks transfer them to the
// global `covered` flags.
struct BranchState {
  std::vector<char> covered;  // per element, identity unused
  int uncovered = 0;
  std::vector<int> mult;      // current block's difference multiplicities
  std::vector<int> touched;   // diffs with mult > 0, in first-touch order
  std::vector<int> block;     // current partial block
  std::vector<char> in_block;
  std::vector<std::vector<int>> done_blocks;
  std::vector<int> subgroup;  // seed subgroup (infinity block group part)
  long long local_nodes = 0;

  explicit BranchState(int n) : covered(n, 0), mult(n, 0), in_block(n, 0) {}
};

void seed_subgroup(const CayleyTable& g, BranchState& st, const std::vector<int>& sub) {
  const int n = g.order();
  std::fill(st.covered.begin(), st.covered.end(), 0);
  st.uncovered = n - 1;
  st.done_blocks.clear();
  st.subgroup = sub;
  for (int x : sub)
    if (x != 0) {
      st.covered[x] = 1;
      --st.uncovered;
    }
}

// The diffs a complete block covers, or nullopt if the block is not an
// admissible orbit representative against the current covered set (some
// difference already covered, or multiplicities do not all equal the block
// stabilizer order). Used both to validate candidate first blocks when
// splitting work and to replay them inside a task.
std::optional<std::vector<int>> block_cover(const SearchShared& sh, const BranchState& st,
                                            const std::vector<int>& block) {
  const CayleyTable& g = *sh.g;
  std::map<int, int> cnt;
  for (int x : block)
    for (int y : block) {
      if (x == y) continue;
      const int d = g.mul(g.inv(x), y);
      if (st.covered[d]) return std::nullopt;
      ++cnt[d];
    }
  // Stabilizer order: any stabilizing translate must send 0 into the block.
  std::vector<char> in(sh.n, 0);
  for (int x : block) in[x] = 1;
  int s = 0;
  for (int h : block) {
    bool fixes = true;
    for (int x : block)
      if (!in[g.mul(h, x)]) {
        fixes = false;
        break;
      }
    if (fixes) ++s;
  }
  if (s > static_cast<int>(sh.stab_allowed.size()) - 1 || !sh.stab_allowed[s])
    return std::nullopt;
  std::vector<int> diffs;
  diffs.reserve(cnt.size());
  for (auto [d, m] : cnt) {
    if (m != s) return std::nullopt;
    diffs.push_back(d);
  }
  return diffs;
}

void apply_cover(BranchState& st, const std::vector<int>& diffs) {
  for (int d : diffs) st.covered[d] = 1;
  st.uncovered -= static_cast<int>(diffs.size());
}

void undo_cover(BranchState& st, const std::vector<int>& diffs) {
  for (int d : diffs) st.covered[d] = 0;
  st.uncovered += static_cast<int>(diffs.size());
}

BaseFamily assemble_family(const CayleyTable& g, int k, const BranchState& st) {
  std::vector<Block> blocks;
  blocks.reserve(st.done_blocks.size() + 1);
  Block inf_block;
  inf_block.elems = st.subgroup;
  inf_block.has_infinity = true;
  blocks.push_back(std::move(inf_block));
  for (const auto& b : st.done_blocks) {
    Block blk;
    blk.elems = b;
    blocks.push_back(std::move(blk));
  }
  return make_family(g, k, std::move(blocks));
}

// Canonicalizes, applies the multiplier filter, self-checks validity, and
// appends. Returns false once the solution budget is exhausted.
bool emit_family(SearchShared& sh, const BranchState& st, std::vector<BaseFamily>& out) {
  const CayleyTable& g = *sh.g;
  BaseFamily f = canonicalize_family(g, assemble_family(g, sh.k, st));
  if (sh.multiplier) {
    const BaseFamily img = canonicalize_family(g, apply_automorphism(g, *sh.multiplier, f));
    if (family_key(g, img) != family_key(g, f)) return true;  // filtered, keep searching
  }
  // Every emitted family must verify; a failure here is a search bug. The
  // development cross-check needs the design-side point cap.
  if (g.order() + 1 <= kMaxDesignPoints) {
    if (!verify_family(g, sh.k, f).valid)
      throw std::logic_error("internal error: search emitted an invalid family");
  } else {
    const DifferenceCensus census = difference_census(g, f);
    bool ok = census.infinity_weight.is_one();
    for (int d = 1; d < g.order() && ok; ++d) ok = census.weights[d].is_one();
    if (!ok) throw std::logic_error("internal error: search emitted an invalid family");
  }
  out.push_back(std::move(f));
  const long long total = sh.emitted.fetch_add(1, std::memory_order_relaxed) + 1;
  if (sh.max_solutions >= 0 && total >= sh.max_solutions) {
    sh.stop.store(true, std::memory_order_relaxed);
    return false;
  }
  return true;
}

bool should_stop(SearchShared& sh, BranchState& st) {
  if ((++st.local_nodes & 1023) == 0) {
    sh.nodes.fetch_add(1024, std::memory_order_relaxed);
    if (sh.hit_deadline()) return true;
  }
  return sh.stop.load(std::memory_order_relaxed);
}

void dfs_blocks(SearchShared& sh, BranchState& st, std::vector<BaseFamily>& out);

// Extends the current partial block by free elements in ascending order,
// maintaining difference multiplicities incrementally. On a full block,
// validates the stabilizer condition and either recurses into the family
// search (collect == nullptr) or records the block (work splitting).
void extend_block(SearchShared& sh, BranchState& st, int from, std::vector<BaseFamily>& out,
                  std::vector<std::vector<int>>* collect) {
  const CayleyTable& g = *sh.g;
  if (should_stop(sh, st)) return;
  if (static_cast<int>(st.block.size()) == sh.k) {
    int s = 0;
    for (int h : st.block) {
      bool fixes = true;
      for (int x : st.block)
        if (!st.in_block[g.mul(h, x)]) {
          fixes = false;
          break;
        }
      if (fixes) ++s;
    }
    if (s > sh.k || !sh.stab_allowed[s]) return;
    for (int d : st.touched)
      if (st.mult[d] != s) return;
    if (collect) {
      collect->push_back(st.block);
      return;
    }
    // Transfer the block's differences to the global covered set and go on
    // to the next block with fresh per-block state. Element markers belong
    // to the block under construction only -- distinct base blocks may share
    // elements (every normalized block contains 0), so the markers are
    // cleared for the descent and restored after.
    std::vector<int> diffs = st.touched;
    for (int d : diffs) {
      st.mult[d] = 0;
      st.covered[d] = 1;
    }
    st.uncovered -= static_cast<int>(diffs.size());
    st.touched.clear();
    st.done_blocks.push_back(st.block);
    std::vector<int> block_snapshot = std::move(st.block);
    st.block.clear();
    for (int x : block_snapshot) st.in_block[x] = 0;

    dfs_blocks(sh, st, out);

    st.block = std::move(block_snapshot);
    for (int x : st.block) st.in_block[x] = 1;
    st.done_blocks.pop_back();
    st.uncovered += static_cast<int>(diffs.size());
    st.touched = diffs;
    for (int d : diffs) {
      st.covered[d] = 0;
      st.mult[d] = s;
    }
    return;
  }
  for (int cand = from; cand < sh.n; ++cand) {
    if (st.in_block[cand]) continue;
    // New ordered pairs against every current element, both orientations.
    int applied[2 * kMaxBlockSize];
    int n_applied = 0;
    bool ok = true;
    for (int x : st.block) {
      const int d1 = g.mul(g.inv(cand), x);
      const int d2 = g.mul(g.inv(x), cand);
      for (int d : {d1, d2}) {
        if (st.covered[d] || st.mult[d] + 1 > sh.max_stab) {
          ok = false;
          break;
        }
        if (st.mult[d]++ == 0) st.touched.push_back(d);
        applied[n_applied++] = d;
      }
      if (!ok) break;
    }
    if (ok) {
      st.block.push_back(cand);
      st.in_block[cand] = 1;
      extend_block(sh, st, cand + 1, out, collect);
      st.in_block[cand] = 0;
      st.block.pop_back();
    }
    // Rollback is strictly LIFO, so a multiplicity returning to zero always
    // sits at the tail of the touched list.
    for (int i = n_applied - 1; i >= 0; --i) {
      const int d = applied[i];
      if (--st.mult[d] == 0) {
        st.touched.pop_back();
      }
    }
    if (sh.stop.load(std::memory_order_relaxed)) return;
  }
}

// Opens the next block on the smallest uncovered difference, or emits when
// everything is covered.
void dfs_blocks(SearchShared& sh, BranchState& st, std::vector<BaseFamily>& out) {
  const CayleyTable& g = *sh.g;
  if (should_stop(sh, st)) return;
  if (st.uncovered == 0) {
    emit_family(sh, st, out);
    return;
  }
  int d = 1;
  while (st.covered[d]) ++d;
  const int di = g.inv(d);
  // Coverage is inverse-symmetric (every block covers g and g^-1 alike), so
  // the partner difference is open as well.
  st.block.assign({0, d});
  st.in_block[0] = st.in_block[d] = 1;
  st.touched.clear();
  st.mult[d] = 1;
  st.touched.push_back(d);
  bool feasible = true;
  if (di == d) {
    if (2 > sh.max_stab) feasible = false;
    else st.mult[d] = 2;
  } else {
    st.mult[di] = 1;
    st.touched.push_back(di);
  }
  if (feasible) extend_block(sh, st, 1, out, nullptr);
  for (int t : st.touched) st.mult[t] = 0;
  st.touched.clear();
  st.in_block[0] = st.in_block[d] = 0;
  st.block.clear();
}

void init_shared_state(SearchShared& sh, const CayleyTable& g, int k, const SearchOptions& opts) {
  if (k < 3) throw std::invalid_argument("block size must be >= 3");
  if (k > kMaxBlockSize)
    throw std::invalid_argument("block size exceeds cap " + std::to_string(kMaxBlockSize));
  if (k - 1 > g.order())
    throw std::invalid_argument("infinity block cannot fit in the group");
  if (opts.prescribed_multiplier && !is_automorphism(g, *opts.prescribed_multiplier))
    throw std::invalid_argument("prescribed multiplier is not an automorphism of the group");

  sh.g = &g;
  sh.n = g.order();
  sh.k = k;
  sh.multiplier = opts.prescribed_multiplier;
  if (opts.timeout_seconds)
    sh.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(*opts.timeout_seconds));
  if (opts.max_solutions) sh.max_solutions = *opts.max_solutions;

  // A block stabilizer acts freely on the block and is a subgroup, so its
  // order divides gcd(k, n) and a subgroup of that order must exist.
  sh.stab_allowed.assign(k + 1, 0);
  sh.stab_allowed[1] = 1;
  sh.max_stab = 1;
  const int limit = std::gcd(k, sh.n);
  for (int s = 2; s <= limit; ++s) {
    if (k % s != 0 || sh.n % s != 0) continue;
    if (!subgroups_of_order(g, s).empty()) {
      sh.stab_allowed[s] = 1;
      sh.max_stab = s;
    }
  }
}

EnumerateResult finalize(const CayleyTable& g, SearchShared& sh,
                         std::vector<BaseFamily> families) {
  EnumerateResult res;
  std::sort(families.begin(), families.end(), [&](const BaseFamily& a, const BaseFamily& b) {
    return family_key(g, a) < family_key(g, b);
  });
  // Each family is constructed exactly once (unique normalized block per
  // orbit, deterministic block order); duplicates would be a search bug.
  for (std::size_t i = 1; i < families.size(); ++i)
    if (family_key(g, families[i - 1]) == family_key(g, families[i]))
      throw std::logic_error("internal error: duplicate family emitted");
  if (sh.max_solutions >= 0 && static_cast<long long>(families.size()) > sh.max_solutions)
    families.resize(static_cast<std::size_t>(sh.max_solutions));
  res.families = std::move(families);
  res.nodes = sh.nodes.load() ;
  const bool timed_out = sh.deadline && Clock::now() >= *sh.deadline &&
                         sh.stop.load(std::memory_order_relaxed);
  const bool truncated = sh.max_solutions >= 0 &&
                         static_cast<long long>(res.families.size()) >= sh.max_solutions &&
                         sh.stop.load(std::memory_order_relaxed);
  if (truncated) {
    res.status = SearchStatus::Truncated;
    res.complete = false;
  } else if (timed_out) {
    res.status = SearchStatus::TimedOut;
    res.complete = false;
  } else {
    res.status = SearchStatus::Complete;
    res.complete = true;
  }
  return res;
}

}  // namespace

EnumerateResult enumerate_families(const CayleyTable& g, int k, const SearchOptions& opts) {
  SearchShared sh;
  init_shared_state(sh, g, k, opts);
  const std::vector<std::vector<int>> seeds = subgroups_of_order(g, k - 1);
  if (seeds.empty()) {
    EnumerateResult res;
    res.status = SearchStatus::NoSubgroup;
    res.complete = true;
    return res;
  }

  // Work splitting: one branch per (seed subgroup, admissible first block).
  // Seed-only families (everything covered by the subgroup) are emitted
  // inline since they have no first block to branch on.
  struct Branch {
    int seed;
    std::vector<int> first_block;
  };
  std::vector<Branch> branches;
  std::vector<BaseFamily> preamble;
  for (int si = 0; si < static_cast<int>(seeds.size()); ++si) {
    BranchState st(sh.n);
    seed_subgroup(g, st, seeds[si]);
    if (st.uncovered == 0) {
      emit_family(sh, st, preamble);
      continue;
    }
    int d = 1;
    while (st.covered[d]) ++d;
    const int di = g.inv(d);
    st.block.assign({0, d});
    st.in_block[0] = st.in_block[d] = 1;
    st.mult[d] = 1;
    st.touched.push_back(d);
    bool feasible = true;
    if (di == d) {
      if (2 > sh.max_stab) feasible = false;
      else st.mult[d] = 2;
    } else {
      st.mult[di] = 1;
      st.touched.push_back(di);
    }
    std::vector<std::vector<int>> first_blocks;
    std::vector<BaseFamily> unused;
    if (feasible) extend_block(sh, st, 1, unused, &first_blocks);
    for (const auto& fb : first_blocks) branches.push_back({si, fb});
  }

  std::vector<std::vector<BaseFamily>> per_branch(branches.size());

#ifdef _OPENMP
  const int want_threads = opts.thread_count >= 1 ? opts.thread_count : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(want_threads)
#endif
  for (std::size_t bi = 0; bi < branches.size(); ++bi) {
    if (sh.stop.load(std::memory_order_relaxed)) continue;
    const Branch& br = branches[bi];
    BranchState st(sh.n);
    seed_subgroup(g, st, seeds[br.seed]);
    const auto diffs = block_cover(sh, st, br.first_block);
    if (!diffs) throw std::logic_error("internal error: first block no longer admissible");
    apply_cover(st, *diffs);
    st.done_blocks.push_back(br.first_block);
    dfs_blocks(sh, st, per_branch[bi]);
    sh.nodes.fetch_add(st.local_nodes & 1023, std::memory_order_relaxed);
  }

  std::vector<BaseFamily> all = std::move(preamble);
  for (auto& v : per_branch)
    for (auto& f : v) all.push_back(std::move(f));
  return finalize(g, sh, std::move(all));
}

namespace {

// Reference enumerator internals: generate-and-test with no incremental
// bookkeeping. Every candidate block is validated from scratch against the
// covered set by block_cover.
void reference_dfs(SearchShared& sh, BranchState& st, std::vector<BaseFamily>& out) {
  if (sh.stop.load(std::memory_order_relaxed) || sh.hit_deadline()) return;
  if (st.uncovered == 0) {
    emit_family(sh, st, out);
    return;
  }
  int d = 1;
  while (st.covered[d]) ++d;
  // Choose the k-2 free elements of the next block in ascending order.
  std::vector<int> block = {0, d};
  auto choose = [&](auto&& self, int from) -> void {
    if (sh.stop.load(std::memory_order_relaxed)) return;
    sh.nodes.fetch_add(1, std::memory_order_relaxed);
    if (static_cast<int>(block.size()) == sh.k) {
      const auto diffs = block_cover(sh, st, block);
      if (!diffs) return;
      apply_cover(st, *diffs);
      st.done_blocks.push_back(block);
      reference_dfs(sh, st, out);
      st.done_blocks.pop_back();
      undo_cover(st, *diffs);
      return;
    }
    for (int e = from; e < sh.n; ++e) {
      if (e == d) continue;
      block.push_back(e);
      self(self, e + 1);
      block.pop_back();
    }
  };
  choose(choose, 1);
}

}  // namespace

EnumerateResult enumerate_families_serial(const CayleyTable& g, int k,
                                          const SearchOptions& opts) {
  SearchShared sh;
  init_shared_state(sh, g, k, opts);
  const std::vector<std::vector<int>> seeds = subgroups_of_order(g, k - 1);
  if (seeds.empty()) {
    EnumerateResult res;
    res.status = SearchStatus::NoSubgroup;
    res.complete = true;
    return res;
  }
  std::vector<BaseFamily> all;
  for (const auto& sub : seeds) {
    BranchState st(sh.n);
    seed_subgroup(g, st, sub);
    reference_dfs(sh, st, all);
  }
  return finalize(g, sh, std::move(all));
}

}  // namespace rotsteiner
