#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rotsteiner/design.hpp"
#include "rotsteiner/family.hpp"
#include "rotsteiner/group.hpp"
#include "rotsteiner/registry.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

using namespace rotsteiner;

namespace {

Block blk(std::vector<int> elems, bool inf = false) {
  Block b;
  b.elems = std::move(elems);
  b.has_infinity = inf;
  return b;
}

Design make_design(int v, int k, std::vector<std::vector<int>> blocks) {
  Design d;
  d.v = v;
  d.k = k;
  for (auto& b : blocks) {
    std::sort(b.begin(), b.end());
    d.blocks.push_back({b.begin(), b.end()});
  }
  std::sort(d.blocks.begin(), d.blocks.end());
  return d;
}

// the affine plane of order 3: rows, columns, and the two diagonal
// directions of a 3x3 grid; this is the unique S(2,3,9)
Design ag23() {
  return make_design(9, 3,
                     {{0, 1, 2}, {3, 4, 5}, {6, 7, 8},    // rows
                      {0, 3, 6}, {1, 4, 7}, {2, 5, 8},    // columns
                      {0, 4, 8}, {1, 5, 6}, {2, 3, 7},    // slope 1
                      {0, 5, 7}, {1, 3, 8}, {2, 4, 6}});  // slope 2
}

Design fano() {
  return make_design(7, 3, {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5},
                            {1, 4, 6}, {2, 3, 6}, {2, 4, 5}});
}

Design relabel(const Design& d, const std::vector<int>& p) {
  Design out;
  out.v = d.v;
  out.k = d.k;
  for (const auto& b : d.blocks) {
    std::vector<std::uint8_t> nb;
    for (auto x : b) nb.push_back(static_cast<std::uint8_t>(p[x]));
    std::sort(nb.begin(), nb.end());
    out.blocks.push_back(std::move(nb));
  }
  std::sort(out.blocks.begin(), out.blocks.end());
  return out;
}

std::vector<int> random_perm(int v, std::mt19937& rng) {
  std::vector<int> p(v);
  for (int i = 0; i < v; ++i) p[i] = i;
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

long long brute_aut_order(const Design& d) {
  std::set<std::vector<std::vector<std::uint8_t>>> blockset = {d.blocks};
  std::vector<int> p(d.v);
  for (int i = 0; i < d.v; ++i) p[i] = i;
  long long count = 0;
  do {
    if (blockset.count(relabel(d, p).blocks)) ++count;
  } while (std::next_permutation(p.begin(), p.end()));
  return count;
}

Design developed(const char* group, int k, std::vector<Block> blocks) {
  auto g = resolve_group(group).table;
  return develop(g, make_family(g, k, std::move(blocks)));
}

}  // namespace

TEST_CASE("development of the classic families") {
  auto d = developed("C8", 3, {blk({0, 1, 3}), blk({0, 4}, true)});
  CHECK(d.v == 9);
  CHECK(d.k == 3);
  CHECK(d.blocks.size() == 12);  // 8 translates + 4 of the half-orbit block
  CHECK(validate_steiner(d).valid);

  // every point lies in (v-1)/(k-1) = 4 blocks; infinity is point 8
  std::map<int, int> through;
  for (const auto& b : d.blocks)
    for (auto x : b) ++through[x];
  for (int p = 0; p < 9; ++p) CHECK(through[p] == 4);

  auto d15 = developed("C15", 4, {blk({0, 1, 3, 7}), blk({0, 5, 10}, true)});
  CHECK(d15.v == 16);
  CHECK(d15.blocks.size() == 20);
  CHECK(validate_steiner(d15).valid);
}

TEST_CASE("the developed C8 design is the affine plane of order 3") {
  auto d = developed("C8", 3, {blk({0, 1, 3}), blk({0, 4}, true)});
  auto cd = design_certificate(d);
  auto ca = design_certificate(ag23());
  CHECK(cd.code == ca.code);
  CHECK(cd.aut_order == 432);
}

TEST_CASE("develop rejects hopeless input") {
  auto c8 = resolve_group("C8").table;
  CHECK_THROWS_AS(develop(c8, make_family(c8, 3, {})), std::invalid_argument);

  // too many points for the design layer
  auto big = make_group(GroupSpec::cyclic(130));
  auto fb = make_family(big, 3, {blk({0, 1, 3})});
  CHECK_THROWS_AS(develop(big, fb), std::invalid_argument);

  // block size beyond the packed-word cap
  auto c24 = resolve_group("C24").table;
  auto wide = make_family(c24, 9, {blk({0, 1, 2, 3, 4, 5, 6, 7, 8})});
  CHECK_THROWS_AS(develop(c24, wide), std::invalid_argument);
}

TEST_CASE("development keeps cross-block multiplicity") {
  // two base blocks in one translate orbit develop into duplicate design
  // blocks, so the pair-coverage check sees the same doubling the census does
  auto c8 = resolve_group("C8").table;
  auto f = make_family(c8, 3, {blk({0, 1, 3}), blk({1, 2, 4}), blk({0, 4}, true)});
  auto d = develop(c8, f);
  CHECK(d.blocks.size() == 20);  // 8 + 8 (coinciding orbit) + 4
  auto rep = validate_steiner(d);
  CHECK_FALSE(rep.valid);
  CHECK(rep.count == 2);
}

TEST_CASE("steiner validation pinpoints defects") {
  auto good = ag23();
  CHECK(validate_steiner(good).valid);

  auto missing = good;
  missing.blocks.pop_back();
  auto r1 = validate_steiner(missing);
  CHECK_FALSE(r1.valid);
  REQUIRE(r1.pair.has_value());
  CHECK(r1.count == 0);

  auto doubled = good;
  doubled.blocks.push_back(doubled.blocks.front());
  std::sort(doubled.blocks.begin(), doubled.blocks.end());
  auto r2 = validate_steiner(doubled);
  CHECK_FALSE(r2.valid);
  CHECK(r2.count == 2);

  auto ragged = good;
  ragged.blocks[0].pop_back();
  CHECK_FALSE(validate_steiner(ragged).valid);

  auto oob = good;
  oob.blocks[0][0] = 200;
  CHECK_FALSE(validate_steiner(oob).valid);
}

TEST_CASE("fingerprints of the two small planes") {
  // affine plane: through any two points, 3 disjoint block pairs
  auto fp = fingerprint(ag23());
  CHECK(fp == std::vector<int>(36, 3));

  // projective plane: every two lines meet, so no disjoint pairs at all
  CHECK(fingerprint(fano()) == std::vector<int>(21, 0));
}

TEST_CASE("automorphism groups against exhaustive relabeling") {
  auto f = fano();
  CHECK(brute_aut_order(f) == 168);
  auto af = design_automorphisms(f);
  CHECK(af.order == 168);
  CHECK(af.perms.size() == 168);
  // the Fano plane is point-transitive
  CHECK(std::set<int>(af.point_orbits.begin(), af.point_orbits.end()).size() == 1);

  auto a = ag23();
  CHECK(brute_aut_order(a) == 432);
  CHECK(automorphism_order(a) == 432);
}

TEST_CASE("automorphism order is divisible by the developing group order") {
  // the group acts on its own development by translation, fixing infinity
  auto d8 = developed("C8", 3, {blk({0, 1, 3}), blk({0, 4}, true)});
  CHECK(automorphism_order(d8) % 8 == 0);

  auto d15 = developed("C15", 4, {blk({0, 1, 3, 7}), blk({0, 5, 10}, true)});
  CHECK(automorphism_order(d15) % 15 == 0);
}

TEST_CASE("certificates are relabeling invariants") {
  auto base = ag23();
  auto cert = design_certificate(base);
  CHECK(cert.aut_order == 432);
  CHECK(cert.fprint == fingerprint(base));
  REQUIRE(!cert.canonical_blocks.empty());

  // canonical blocks are a relabeling of the design itself
  Design canon;
  canon.v = base.v;
  canon.k = base.k;
  canon.blocks = cert.canonical_blocks;
  std::sort(canon.blocks.begin(), canon.blocks.end());
  CHECK(validate_steiner(canon).valid);
  CHECK(design_certificate(canon).code == cert.code);

  std::mt19937 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    auto r = relabel(base, random_perm(9, rng));
    CHECK(validate_steiner(r).valid);
    auto cr = design_certificate(r);
    CHECK(cr.fprint == cert.fprint);
    CHECK(cr.aut_order == cert.aut_order);
    CHECK(cr.code == cert.code);
  }
}

TEST_CASE("isomorphism classes merge independent constructions") {
  auto d_c8 = developed("C8", 3, {blk({0, 1, 3}), blk({0, 4}, true)});
  std::mt19937 rng(5);
  auto shuffled = relabel(ag23(), random_perm(9, rng));

  auto iso = isomorphism_classes({d_c8, ag23(), shuffled});
  REQUIRE(iso.classes.size() == 1);
  CHECK(iso.classes[0] == std::vector<int>{0, 1, 2});
  CHECK(iso.aut_orders[0] == 432);
  CHECK(iso.fprints[0] == std::vector<int>(36, 3));
}

namespace {

// number of Pasch configurations: 4 blocks on exactly 6 points, every
// point on exactly 2 of them. Isomorphism invariant, computed here from
// scratch so the separation below does not lean on the code under test.
int pasch_count(const Design& d) {
  const int n = static_cast<int>(d.blocks.size());
  int cnt = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          std::vector<int> deg(d.v, 0);
          for (int b : {i, j, k, l})
            for (auto x : d.blocks[b]) ++deg[x];
          int pts = 0;
          bool ok = true;
          for (int p = 0; p < d.v && ok; ++p) {
            if (deg[p] == 1 || deg[p] > 2) ok = false;
            if (deg[p] == 2) ++pts;
          }
          if (ok && pts == 6) ++cnt;
        }
  return cnt;
}

// the two Steiner triple systems on 13 points: the cyclic one, and the one
// obtained from it by trading the Pasch {0,1,4},{0,2,7},{1,7,9},{2,4,9}
// for the complementary four blocks on the same six points
std::pair<Design, Design> both_sts13() {
  // no fixed point here: the cyclic system is developed over Z13 acting on
  // all 13 points, so we translate the base blocks by hand
  Design cyc;
  cyc.v = 13;
  cyc.k = 3;
  for (auto base : {std::vector<int>{0, 1, 4}, std::vector<int>{0, 2, 7}}) {
    for (int t = 0; t < 13; ++t) {
      std::vector<std::uint8_t> img;
      for (int e : base) img.push_back(static_cast<std::uint8_t>((e + t) % 13));
      std::sort(img.begin(), img.end());
      cyc.blocks.push_back(std::move(img));
    }
  }
  std::sort(cyc.blocks.begin(), cyc.blocks.end());

  Design other = cyc;
  auto swap_block = [&](std::vector<std::uint8_t> from, std::vector<std::uint8_t> to) {
    auto it = std::find(other.blocks.begin(), other.blocks.end(), from);
    REQUIRE(it != other.blocks.end());
    *it = std::move(to);
  };
  swap_block({0, 1, 4}, {0, 1, 7});
  swap_block({0, 2, 7}, {0, 2, 4});
  swap_block({1, 7, 9}, {1, 4, 9});
  swap_block({2, 4, 9}, {2, 7, 9});
  std::sort(other.blocks.begin(), other.blocks.end());
  return {cyc, other};
}

}  // namespace

TEST_CASE("isomorphism classes separate the two triple systems on 13 points") {
  auto [cyc, other] = both_sts13();
  REQUIRE(validate_steiner(cyc).valid);
  REQUIRE(validate_steiner(other).valid);

  // independent witness that they cannot be isomorphic
  CHECK(pasch_count(cyc) == 13);
  CHECK(pasch_count(other) == 8);

  auto iso = isomorphism_classes({cyc, other});
  CHECK(iso.classes.size() == 2);
  CHECK(design_certificate(cyc).code != design_certificate(other).code);

  // the known automorphism group orders of the pair
  CHECK(automorphism_order(cyc) == 39);
  CHECK(automorphism_order(other) == 6);
}

TEST_CASE("isomorphism classification rejects mixed parameters") {
  CHECK_THROWS_AS(isomorphism_classes({ag23(), fano()}), std::invalid_argument);
}

TEST_CASE("classification is input-order independent") {
  auto [d1, d2] = both_sts13();
  std::mt19937 rng(31);
  auto d3 = relabel(d1, random_perm(13, rng));

  auto a = isomorphism_classes({d1, d2, d3});
  auto b = isomorphism_classes({d3, d1, d2});
  REQUIRE(a.classes.size() == 2);
  REQUIRE(b.classes.size() == 2);
  CHECK(a.aut_orders == b.aut_orders);
  CHECK(a.fprints == b.fprints);
}
