#include "rotsteiner/design.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rotsteiner {

Design develop(const CayleyTable& g, const BaseFamily& f) {
  const int n = g.order();
  if (f.group_token != g.token() || f.group_order != n)
    throw std::invalid_argument("family was built over a different group");
  if (n < 2) throw std::invalid_argument("group too small to develop");
  if (n + 1 > kMaxDesignPoints)
    throw std::invalid_argument("group order exceeds design point cap");
  if (f.blocks.empty()) throw std::invalid_argument("family has no blocks");
  if (f.k < 2 || f.k > kMaxBlockSize)
    throw std::invalid_argument("block size outside [2, " + std::to_string(kMaxBlockSize) + "]");
  for (const Block& blk : f.blocks) {
    const std::size_t sz = blk.elems.size() + (blk.has_infinity ? 1 : 0);
    if (sz < 1 || sz > kMaxBlockSize)
      throw std::invalid_argument("family block size outside design caps");
  }
  // The distinct left translates of each block; infinity is the fixed
  // point n. Translates are deduplicated per block (two translates agree
  // exactly when they differ by a stabilizer element) but NOT across
  // blocks: base blocks sharing a translate orbit contribute duplicate
  // design blocks, matching the additive census accounting. Coverage
  // defects are deliberately NOT checked here so that verify_family can
  // cross-check invalid candidates.
  std::vector<std::vector<std::uint8_t>> blocks;
  for (const Block& blk : f.blocks) {
    std::set<std::vector<std::uint8_t>> orbit;
    for (int t = 0; t < n; ++t) {
      std::vector<std::uint8_t> img;
      img.reserve(blk.elems.size() + 1);
      for (int e : blk.elems) img.push_back(static_cast<std::uint8_t>(g.mul(t, e)));
      if (blk.has_infinity) img.push_back(static_cast<std::uint8_t>(n));
      std::sort(img.begin(), img.end());
      orbit.insert(std::move(img));
    }
    blocks.insert(blocks.end(), orbit.begin(), orbit.end());
  }
  std::sort(blocks.begin(), blocks.end());
  Design d;
  d.v = n + 1;
  d.k = f.k;
  d.blocks = std::move(blocks);
  return d;
}

SteinerReport validate_steiner(const Design& d) {
  SteinerReport rep;
  if (d.v < 2 || d.v > kMaxDesignPoints) {
    rep.detail = "point count outside [2, " + std::to_string(kMaxDesignPoints) + "]";
    return rep;
  }
  if (d.k < 2 || d.k > kMaxBlockSize) {
    rep.detail = "block size outside [2, " + std::to_string(kMaxBlockSize) + "]";
    return rep;
  }
  for (std::size_t bi = 0; bi < d.blocks.size(); ++bi) {
    const auto& blk = d.blocks[bi];
    if (static_cast<int>(blk.size()) != d.k) {
      rep.detail = "block " + std::to_string(bi) + " has " + std::to_string(blk.size()) +
                   " points, expected " + std::to_string(d.k);
      return rep;
    }
    for (std::size_t i = 0; i < blk.size(); ++i) {
      if (blk[i] >= d.v) {
        rep.detail = "block " + std::to_string(bi) + " contains out-of-range point " +
                     std::to_string(blk[i]);
        return rep;
      }
      if (i > 0 && blk[i] <= blk[i - 1]) {
        rep.detail = "block " + std::to_string(bi) + " is not sorted/distinct";
        return rep;
      }
    }
  }
  std::vector<std::uint16_t> count(static_cast<std::size_t>(d.v) * d.v, 0);
  for (const auto& blk : d.blocks)
    for (std::size_t i = 0; i < blk.size(); ++i)
      for (std::size_t j = i + 1; j < blk.size(); ++j)
        ++count[static_cast<std::size_t>(blk[i]) * d.v + blk[j]];
  for (int p = 0; p < d.v; ++p)
    for (int q = p + 1; q < d.v; ++q) {
      const int c = count[static_cast<std::size_t>(p) * d.v + q];
      if (c != 1) {
        rep.pair = {p, q};
        rep.count = c;
        rep.detail = "pair {" + std::to_string(p) + "," + std::to_string(q) + "} covered " +
                     std::to_string(c) + " times";
        return rep;
      }
    }
  rep.valid = true;
  rep.detail = "valid";
  return rep;
}

namespace {

struct DesignIndex {
  int v = 0, k = 0, b = 0;
  std::vector<std::array<std::uint64_t, 2>> mask;  // per block
  std::vector<std::vector<int>> through;           // per point: block ids
  std::vector<int> pair_block;                     // v*v -> block id (-1 on diagonal)
};

DesignIndex build_index(const Design& d) {
  const SteinerReport rep = validate_steiner(d);
  if (!rep.valid) throw std::invalid_argument("operation needs a valid design: " + rep.detail);
  DesignIndex idx;
  idx.v = d.v;
  idx.k = d.k;
  idx.b = static_cast<int>(d.blocks.size());
  idx.mask.assign(idx.b, {0, 0});
  idx.through.assign(idx.v, {});
  idx.pair_block.assign(static_cast<std::size_t>(idx.v) * idx.v, -1);
  for (int bi = 0; bi < idx.b; ++bi) {
    const auto& blk = d.blocks[bi];
    for (std::uint8_t p : blk) {
      idx.mask[bi][p >> 6] |= 1ULL << (p & 63);
      idx.through[p].push_back(bi);
    }
    for (std::size_t i = 0; i < blk.size(); ++i)
      for (std::size_t j = 0; j < blk.size(); ++j)
        if (i != j) idx.pair_block[static_cast<std::size_t>(blk[i]) * idx.v + blk[j]] = bi;
  }
  return idx;
}

bool disjoint(const std::array<std::uint64_t, 2>& a, const std::array<std::uint64_t, 2>& b) {
  return (a[0] & b[0]) == 0 && (a[1] & b[1]) == 0;
}

// f[p][q] = number of unordered disjoint block pairs {A, B} with p in A and
// q in B. Each such pair appears exactly once in the iteration because A
// avoids q and B avoids p (either would force the pair block of {p,q}).
std::vector<int> pair_values(const DesignIndex& idx) {
  std::vector<int> f(static_cast<std::size_t>(idx.v) * idx.v, 0);
  for (int p = 0; p < idx.v; ++p)
    for (int q = p + 1; q < idx.v; ++q) {
      const int t = idx.pair_block[static_cast<std::size_t>(p) * idx.v + q];
      int c = 0;
      for (int a : idx.through[p]) {
        if (a == t) continue;
        for (int b : idx.through[q]) {
          if (b == t) continue;
          if (disjoint(idx.mask[a], idx.mask[b])) ++c;
        }
      }
      f[static_cast<std::size_t>(p) * idx.v + q] = c;
      f[static_cast<std::size_t>(q) * idx.v + p] = c;
    }
  return f;
}

}  // namespace

std::vector<int> fingerprint(const Design& d) {
  const DesignIndex idx = build_index(d);
  const std::vector<int> f = pair_values(idx);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(idx.v) * (idx.v - 1) / 2);
  for (int p = 0; p < idx.v; ++p)
    for (int q = p + 1; q < idx.v; ++q)
      out.push_back(f[static_cast<std::size_t>(p) * idx.v + q]);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct AutSearchState {
  const DesignIndex& idx;
  const std::vector<int>& f;          // pair values
  std::vector<int> point_class;       // profile class per point
  std::vector<int> img;               // point image, -1 unassigned
  std::vector<char> used;             // image points taken
  std::vector<int> blk_img;           // block image, -1 unassigned
  std::vector<char> blk_used;         // image blocks taken
  DesignAutomorphisms out;
  UnionFind orbits;

  AutSearchState(const DesignIndex& i, const std::vector<int>& fv)
      : idx(i), f(fv), img(i.v, -1), used(i.v, 0), blk_img(i.b, -1), blk_used(i.b, 0),
        orbits(i.v) {}
};

void aut_dfs(AutSearchState& s, int p) {
  const int v = s.idx.v;
  if (p == v) {
    std::vector<std::uint8_t> perm(v);
    for (int i = 0; i < v; ++i) {
      perm[i] = static_cast<std::uint8_t>(s.img[i]);
      s.orbits.unite(i, s.img[i]);
    }
    s.out.perms.push_back(std::move(perm));
    ++s.out.order;
    return;
  }
  for (int q = 0; q < v; ++q) {
    if (s.used[q] || s.point_class[q] != s.point_class[p]) continue;
    // Consistency against every assigned point: pair values must match and
    // block images must stay a well-defined injection.
    bool ok = true;
    int trail[kMaxDesignPoints];
    int n_trail = 0;
    for (int p2 = 0; p2 < p && ok; ++p2) {
      const std::size_t pp = static_cast<std::size_t>(p) * v + p2;
      const std::size_t qq = static_cast<std::size_t>(q) * v + s.img[p2];
      if (s.f[pp] != s.f[qq]) {
        ok = false;
        break;
      }
      const int a = s.idx.pair_block[pp];
      const int a2 = s.idx.pair_block[qq];
      if (s.blk_img[a] == -1) {
        if (s.blk_used[a2]) {
          ok = false;
          break;
        }
        s.blk_img[a] = a2;
        s.blk_used[a2] = 1;
        trail[n_trail++] = a;
      } else if (s.blk_img[a] != a2) {
        ok = false;
        break;
      }
    }
    if (ok) {
      s.img[p] = q;
      s.used[q] = 1;
      aut_dfs(s, p + 1);
      s.used[q] = 0;
      s.img[p] = -1;
    }
    for (int i = n_trail - 1; i >= 0; --i) {
      s.blk_used[s.blk_img[trail[i]]] = 0;
      s.blk_img[trail[i]] = -1;
    }
  }
}

std::vector<int> point_classes(const DesignIndex& idx, const std::vector<int>& f) {
  std::map<std::vector<int>, int> class_of;
  std::vector<std::vector<int>> profiles(idx.v);
  for (int p = 0; p < idx.v; ++p) {
    std::vector<int> row;
    row.reserve(idx.v - 1);
    for (int q = 0; q < idx.v; ++q)
      if (q != p) row.push_back(f[static_cast<std::size_t>(p) * idx.v + q]);
    std::sort(row.begin(), row.end());
    profiles[p] = std::move(row);
  }
  std::vector<int> cls(idx.v);
  for (int p = 0; p < idx.v; ++p) {
    auto [it, fresh] = class_of.emplace(profiles[p], static_cast<int>(class_of.size()));
    (void)fresh;
    cls[p] = it->second;
  }
  return cls;
}

}  // namespace

DesignAutomorphisms design_automorphisms(const Design& d) {
  const DesignIndex idx = build_index(d);
  const std::vector<int> f = pair_values(idx);
  AutSearchState s(idx, f);
  s.point_class = point_classes(idx, f);
  aut_dfs(s, 0);
  DesignAutomorphisms out = std::move(s.out);
  out.point_orbits.assign(idx.v, 0);
  std::map<int, int> root_id;
  for (int p = 0; p < idx.v; ++p) {
    const int root = s.orbits.find(p);
    auto [it, fresh] = root_id.emplace(root, static_cast<int>(root_id.size()));
    (void)fresh;
    out.point_orbits[p] = it->second;
  }
  return out;
}

long long automorphism_order(const Design& d) { return design_automorphisms(d).order; }

namespace {

// Canonical labeling: minimize the sorted vector of packed block words over
// all relabelings. A block's word packs its points in descending order, one
// byte each, so word order == colex order on label sets and every block's
// word is fixed the moment its last point is labeled.
struct CanonSearch {
  const DesignIndex& idx;
  const std::vector<std::vector<std::uint8_t>>& auts;
  std::vector<int> label_of;     // source point -> label, -1 unassigned
  std::vector<int> remaining;    // per block: points not yet labeled
  std::vector<std::uint64_t> partial_word;  // per block: word accumulated so far
  std::vector<std::uint64_t> code;
  std::vector<std::uint64_t> best;
  bool have_best = false;
  long long best_version = 0;

  CanonSearch(const DesignIndex& i, const std::vector<std::vector<std::uint8_t>>& a)
      : idx(i), auts(a), label_of(i.v, -1), remaining(i.b, i.k), partial_word(i.b, 0) {}

  // Relation of the running code to the incumbent's prefix of equal length:
  // -1 strictly smaller, 0 equal, +1 dominated (strictly larger somewhere).
  int prefix_relation() const {
    if (!have_best) return -1;
    for (std::size_t i = 0; i < code.size(); ++i) {
      if (code[i] < best[i]) return -1;
      if (code[i] > best[i]) return 1;
    }
    return 0;
  }
};

// Words of blocks that would complete if `p` received label `t`.
void completed_words(const CanonSearch& s, int p, int t, std::vector<std::uint64_t>& out) {
  out.clear();
  for (int bi : s.idx.through[p])
    if (s.remaining[bi] == 1)
      out.push_back(s.partial_word[bi] | (static_cast<std::uint64_t>(t)
                                          << (8 * (static_cast<std::size_t>(s.idx.k) - 1))));
  std::sort(out.begin(), out.end());
}

// partial_word keeps each point byte shifted by the count of points that
// were already present when it was added, so the final packed word lists
// labels in descending order (labels are assigned in increasing order).
void canon_dfs(CanonSearch& s, int t, const std::vector<int>& stab) {
  const int v = s.idx.v;
  if (t == v) {
    if (!s.have_best || s.code < s.best) {
      s.best = s.code;
      s.have_best = true;
      ++s.best_version;
    }
    return;
  }
  int relation = s.prefix_relation();
  long long seen_version = s.best_version;
  if (relation > 0) return;  // dominated, dead subtree
  if (relation == 0 && s.code.size() < s.best.size()) {
    // Every word appended below this node tops out at label >= t; if the
    // incumbent's next word uses a smaller top label the subtree loses.
    const int next_top =
        static_cast<int>(s.best[s.code.size()] >> (8 * (static_cast<std::size_t>(s.idx.k) - 1)));
    if (next_top < t) return;
  }
  // Candidate sources, ordered by the words they would complete (completing
  // small words first), ties by point index; deduplicated by the orbits of
  // the stabilizer of the assigned sequence.
  struct Cand {
    std::vector<std::uint64_t> words;
    int p;
  };
  std::vector<Cand> cands;
  std::vector<std::uint64_t> words;
  for (int p = 0; p < v; ++p) {
    if (s.label_of[p] != -1) continue;
    completed_words(s, p, t, words);
    cands.push_back({words, p});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    const bool ae = a.words.empty(), be = b.words.empty();
    if (ae != be) return be;  // non-empty word lists first
    if (a.words != b.words) return a.words < b.words;
    return a.p < b.p;
  });
  std::vector<char> orbit_seen(v, 0);
  for (const Cand& c : cands) {
    if (orbit_seen[c.p]) continue;
    for (const auto& gi : stab) orbit_seen[s.auts[gi][c.p]] = 1;
    // A best update inside an earlier sibling's subtree invalidates the
    // cached relation; recompute against the current incumbent.
    if (seen_version != s.best_version) {
      relation = s.prefix_relation();
      seen_version = s.best_version;
      if (relation > 0) return;
    }
    // Apply: assign label t to source c.p.
    const std::size_t code_len = s.code.size();
    for (std::uint64_t w : c.words) s.code.push_back(w);
    if (relation == 0 && s.have_best) {
      // Equal prefix so far: the appended words decide. Dominated branches
      // are skipped before paying for the descent.
      bool worse = false;
      for (std::size_t i = code_len; i < s.code.size() && i < s.best.size(); ++i) {
        if (s.code[i] > s.best[i]) {
          worse = true;
          break;
        }
        if (s.code[i] < s.best[i]) break;
      }
      if (worse) {
        s.code.resize(code_len);
        continue;
      }
    }
    s.label_of[c.p] = t;
    std::vector<std::pair<int, std::uint64_t>> undo;
    for (int bi : s.idx.through[c.p]) {
      undo.emplace_back(bi, s.partial_word[bi]);
      --s.remaining[bi];
      // Byte position grows with assignment order; labels are assigned in
      // increasing order, so the top byte ends up holding the largest label.
      s.partial_word[bi] |= static_cast<std::uint64_t>(t)
                            << (8 * static_cast<std::size_t>(s.idx.k - 1 - s.remaining[bi]));
    }
    std::vector<int> child_stab;
    for (int gi : stab)
      if (s.auts[gi][c.p] == c.p) child_stab.push_back(gi);
    canon_dfs(s, t + 1, child_stab);
    for (auto& [bi, w] : undo) {
      s.partial_word[bi] = w;
      ++s.remaining[bi];
    }
    s.label_of[c.p] = -1;
    s.code.resize(code_len);
  }
}

std::vector<std::vector<std::uint8_t>> decode_code(const std::vector<std::uint64_t>& code,
                                                   int k) {
  std::vector<std::vector<std::uint8_t>> blocks;
  blocks.reserve(code.size());
  for (std::uint64_t w : code) {
    // Low byte holds the smallest label, so bytes read out already sorted.
    std::vector<std::uint8_t> blk(k);
    for (int i = 0; i < k; ++i)
      blk[i] = static_cast<std::uint8_t>((w >> (8 * static_cast<std::size_t>(i))) & 0xff);
    blocks.push_back(std::move(blk));
  }
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

std::vector<std::uint64_t> canonical_code(const Design& d,
                                          const std::vector<std::vector<std::uint8_t>>& auts) {
  const DesignIndex idx = build_index(d);
  CanonSearch s(idx, auts);
  std::vector<int> all;
  all.reserve(auts.size());
  for (std::size_t i = 0; i < auts.size(); ++i) all.push_back(static_cast<int>(i));
  canon_dfs(s, 0, all);
  if (!s.have_best) throw std::logic_error("canonical search found no labeling");
  return s.best;
}

}  // namespace

IsoCertificate design_certificate(const Design& d) {
  IsoCertificate cert;
  cert.fprint = fingerprint(d);
  DesignAutomorphisms auts = design_automorphisms(d);
  cert.aut_order = auts.order;
  cert.code = canonical_code(d, auts.perms);
  cert.canonical_blocks = decode_code(cert.code, d.k);
  return cert;
}

IsoClasses isomorphism_classes(const std::vector<Design>& designs, int thread_count) {
  IsoClasses out;
  if (designs.empty()) return out;
  for (const Design& d : designs)
    if (d.v != designs[0].v || d.k != designs[0].k)
      throw std::invalid_argument("designs have mixed parameters (v, k)");

  const int nd = static_cast<int>(designs.size());
  std::vector<std::vector<int>> fps(nd);
  std::vector<long long> auts(nd);
  std::vector<std::vector<std::vector<std::uint8_t>>> aut_perms(nd);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) \
    num_threads(thread_count >= 1 ? thread_count : omp_get_max_threads())
#endif
  for (int i = 0; i < nd; ++i) {
    const DesignIndex idx = build_index(designs[i]);
    const std::vector<int> f = pair_values(idx);
    std::vector<int> flat;
    for (int p = 0; p < idx.v; ++p)
      for (int q = p + 1; q < idx.v; ++q)
        flat.push_back(f[static_cast<std::size_t>(p) * idx.v + q]);
    std::sort(flat.begin(), flat.end());
    fps[i] = std::move(flat);
    DesignAutomorphisms da = design_automorphisms(designs[i]);
    auts[i] = da.order;
    aut_perms[i] = std::move(da.perms);
  }

  // Bucket by the cheap invariants; canonical codes only decide ties.
  std::map<std::pair<std::vector<int>, long long>, std::vector<int>> buckets;
  for (int i = 0; i < nd; ++i) buckets[{fps[i], auts[i]}].push_back(i);

  std::map<std::tuple<std::vector<int>, long long, std::vector<std::uint64_t>>,
           std::vector<int>>
      classes;
  for (auto& [key, members] : buckets) {
    if (members.size() == 1) {
      classes[{key.first, key.second, {}}] = members;
      continue;
    }
    std::vector<std::vector<std::uint64_t>> codes(members.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) \
    num_threads(thread_count >= 1 ? thread_count : omp_get_max_threads())
#endif
    for (std::size_t mi = 0; mi < members.size(); ++mi)
      codes[mi] = canonical_code(designs[members[mi]], aut_perms[members[mi]]);
    for (std::size_t mi = 0; mi < members.size(); ++mi)
      classes[{key.first, key.second, codes[mi]}].push_back(members[mi]);
  }
  for (auto& [key, members] : classes) {
    std::sort(members.begin(), members.end());
    out.classes.push_back(members);
    out.fprints.push_back(std::get<0>(key));
    out.aut_orders.push_back(std::get<1>(key));
  }
  return out;
}

}  // namespace rotsteiner
