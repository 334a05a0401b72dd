#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rotsteiner/family.hpp"
#include "rotsteiner/group.hpp"
#include "rotsteiner/registry.hpp"

#include <algorithm>
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

// random translate + reorder of a family; equivalence-preserving by design
BaseFamily jitter(const CayleyTable& g, const BaseFamily& f, std::mt19937& rng) {
  BaseFamily out = f;
  std::uniform_int_distribution<int> pick(0, g.order() - 1);
  for (auto& b : out.blocks) {
    int t = pick(rng);
    for (int& x : b.elems) x = g.mul(t, x);
    std::sort(b.elems.begin(), b.elems.end());
  }
  std::shuffle(out.blocks.begin(), out.blocks.end(), rng);
  return out;
}

}  // namespace

TEST_CASE("rational arithmetic normalizes") {
  CHECK(Rational::of(2, 4) == Rational::of(1, 2));
  CHECK(Rational::of(-1, -2) == Rational::of(1, 2));
  CHECK((Rational::of(1, 2) + Rational::of(1, 2)).is_one());
  CHECK(Rational::of(0, 7).is_zero());
  CHECK(Rational::of(3, 2).str() == "3/2");
  CHECK(Rational::of(4, 2).str() == "2");
}

TEST_CASE("left difference is translation invariant") {
  for (const char* name : {"C8", "Q8", "D12", "C6xC3", "SL(2,3)"}) {
    auto g = resolve_group(name).table;
    const int n = g.order();
    for (int t = 0; t < n; ++t)
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          CHECK(left_difference(g, g.mul(t, x), g.mul(t, y)) ==
                left_difference(g, x, y));
  }
}

TEST_CASE("block stabilizers") {
  auto c8 = resolve_group("C8").table;
  CHECK(block_stabilizer(c8, blk({0, 1, 3})) == std::vector<int>{0});
  CHECK(block_stabilizer(c8, blk({0, 4})) == std::vector<int>{0, 4});
  CHECK(block_stabilizer(c8, blk({0, 2, 4, 6})) == std::vector<int>{0, 2, 4, 6});
  // infinity rides along without affecting the group part
  CHECK(block_stabilizer(c8, blk({0, 4}, true)) == std::vector<int>{0, 4});
}

TEST_CASE("difference census on worked examples") {
  auto c8 = resolve_group("C8").table;

  // the valid family: long block with trivial stabilizer plus {0,4}+inf
  auto good = make_family(c8, 3, {blk({0, 1, 3}), blk({0, 4}, true)});
  auto cen = difference_census(c8, good);
  for (int d = 1; d < 8; ++d) CHECK_MESSAGE(cen.weights[d].is_one(), "d=", d);
  CHECK(cen.infinity_weight.is_one());

  // {0,1,2} double-covers 1 and 7, misses 3 and 5
  auto bad = make_family(c8, 3, {blk({0, 1, 2}), blk({0, 4}, true)});
  auto cen2 = difference_census(c8, bad);
  CHECK(cen2.weights[1] == Rational::of(2));
  CHECK(cen2.weights[7] == Rational::of(2));
  CHECK(cen2.weights[2].is_one());
  CHECK(cen2.weights[6].is_one());
  CHECK(cen2.weights[3].is_zero());
  CHECK(cen2.weights[5].is_zero());
  CHECK(cen2.weights[4].is_one());
  CHECK(cen2.infinity_weight.is_one());

  // no blocks: all-zero census
  auto empty = make_family(c8, 3, {});
  auto cen3 = difference_census(c8, empty);
  for (int d = 1; d < 8; ++d) CHECK(cen3.weights[d].is_zero());
  CHECK(cen3.infinity_weight.is_zero());
}

TEST_CASE("census is inverse-symmetric") {
  auto g = resolve_group("Q8").table;
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pick(0, 7);
  for (int trial = 0; trial < 50; ++trial) {
    std::set<int> s;
    while (s.size() < 3u) s.insert(pick(rng));
    auto f = make_family(g, 3, {blk({s.begin(), s.end()})});
    auto cen = difference_census(g, f);
    for (int d = 1; d < 8; ++d) CHECK(cen.weights[d] == cen.weights[g.inv(d)]);
  }
}

TEST_CASE("verify_family accepts the textbook families") {
  auto c8 = resolve_group("C8").table;
  auto f = make_family(c8, 3, {blk({0, 1, 3}), blk({0, 4}, true)});
  auto rep = verify_family(c8, 3, f);
  CHECK(rep.valid);
  CHECK(rep.defect == FamilyDefect::None);

  auto c15 = resolve_group("C15").table;
  auto f15 = make_family(c15, 4, {blk({0, 1, 3, 7}), blk({0, 5, 10}, true)});
  CHECK(verify_family(c15, 4, f15).valid);
}

TEST_CASE("verify_family reports defects precisely") {
  auto c8 = resolve_group("C8").table;

  auto rep1 = verify_family(c8, 3, make_family(c8, 3, {blk({0, 1, 3})}));
  CHECK_FALSE(rep1.valid);
  CHECK(rep1.defect == FamilyDefect::NoInfinityBlock);

  auto two_inf = make_family(
      c8, 3, {blk({0, 4}, true), blk({0, 2}, true), blk({0, 1, 3})});
  CHECK(verify_family(c8, 3, two_inf).defect == FamilyDefect::MultipleInfinityBlocks);

  auto wrong_size = make_family(c8, 3, {blk({0, 1}), blk({0, 4}, true)});
  CHECK(verify_family(c8, 3, wrong_size).defect == FamilyDefect::WrongBlockSizes);

  auto bad = verify_family(c8, 3, make_family(c8, 3, {blk({0, 1, 2}), blk({0, 4}, true)}));
  CHECK_FALSE(bad.valid);
  CHECK(bad.defect == FamilyDefect::CoverageDefect);
  REQUIRE(bad.defect_element.has_value());
  REQUIRE(bad.defect_weight.has_value());
  const int d = *bad.defect_element;
  CHECK((d == 1 || d == 3 || d == 5 || d == 7));
}

TEST_CASE("blocks sharing a translate orbit are a coverage defect, not a crash") {
  auto c8 = resolve_group("C8").table;
  // {1,2,4} is the translate 1 + {0,1,3}: every long difference weighted twice
  auto f = make_family(c8, 3, {blk({0, 1, 3}), blk({1, 2, 4}), blk({0, 4}, true)});
  auto rep = verify_family(c8, 3, f);
  CHECK_FALSE(rep.valid);
  CHECK(rep.defect == FamilyDefect::CoverageDefect);
  REQUIRE(rep.defect_weight.has_value());
  CHECK(*rep.defect_weight == Rational::of(2));

  // literally repeated block: same story
  auto f2 = make_family(c8, 3, {blk({0, 1, 3}), blk({0, 1, 3}), blk({0, 4}, true)});
  CHECK(verify_family(c8, 3, f2).defect == FamilyDefect::CoverageDefect);
}

TEST_CASE("parameter admissibility") {
  CHECK(admissible(9, 3).admissible);
  CHECK(admissible(16, 4).admissible);
  CHECK(admissible(25, 4).admissible);
  CHECK(admissible(13, 4).admissible);
  CHECK(admissible(21, 5).admissible);
  CHECK(admissible(41, 5).admissible);

  CHECK_FALSE(admissible(8, 3).admissible);   // 2 does not divide 7
  CHECK_FALSE(admissible(10, 3).admissible);
  CHECK_FALSE(admissible(16, 3).admissible);  // k-1 = 2 does not divide 15
  CHECK_FALSE(admissible(22, 4).admissible);
  CHECK_FALSE(admissible(9, 3).reasons.size());

  CHECK_THROWS_AS(admissible(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(admissible(5, 1), std::invalid_argument);
}

TEST_CASE("canonical form collapses translation and reorder") {
  auto c8 = resolve_group("C8").table;
  auto canon = make_family(c8, 3, {blk({0, 1, 3}), blk({0, 4}, true)});
  auto messy = make_family(c8, 3, {blk({0, 4}, true), blk({1, 2, 4})});
  CHECK(canonicalize_family(c8, messy) == canonicalize_family(c8, canon));

  // idempotent
  auto once = canonicalize_family(c8, messy);
  CHECK(canonicalize_family(c8, once) == once);

  // random jitter never changes the canonical form
  std::mt19937 rng(42);
  for (int trial = 0; trial < 200; ++trial)
    CHECK(canonicalize_family(c8, jitter(c8, canon, rng)) == once);

  // keys match canonical forms
  CHECK(family_key(c8, once) == family_key(c8, canonicalize_family(c8, messy)));
}

TEST_CASE("canonical form on a nonabelian group") {
  auto q8 = resolve_group("Q8").table;
  auto f = make_family(q8, 3, {blk({0, 1, 3}), blk({0, 2}, true)});
  auto c = canonicalize_family(q8, f);
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial)
    CHECK(canonicalize_family(q8, jitter(q8, f, rng)) == c);
}

TEST_CASE("automorphism images and equivalence classes") {
  auto c8 = resolve_group("C8").table;
  auto f1 = make_family(c8, 3, {blk({0, 1, 3}), blk({0, 4}, true)});

  // x -> 5x sends {0,1,3} to the {0,1,6} orbit: equivalent, not translate
  Automorphism a5;
  a5.perm.assign(8, 0);
  for (int i = 0; i < 8; ++i) a5.perm[i] = static_cast<std::uint16_t>(5 * i % 8);
  auto f2 = apply_automorphism(c8, a5, f1);
  CHECK(canonicalize_family(c8, f2) != canonicalize_family(c8, f1));

  auto f3 = make_family(c8, 3, {blk({0, 1, 2}), blk({0, 4}, true)});

  auto cls = equivalence_classes(c8, {f1, f2, f3});
  REQUIRE(cls.representatives.size() == 2);
  REQUIRE(cls.members.size() == 2);
  // f1 and f2 land together, f3 alone
  std::vector<std::vector<int>> members = cls.members;
  std::sort(members.begin(), members.end());
  CHECK(members == std::vector<std::vector<int>>{{0, 1}, {2}});
}

TEST_CASE("equivalence rejects families over a different group") {
  auto c8 = resolve_group("C8").table;
  auto q8 = resolve_group("Q8").table;
  auto f = make_family(q8, 3, {blk({0, 1, 3}), blk({0, 2}, true)});
  CHECK_THROWS_AS(equivalence_classes(c8, {f}), std::invalid_argument);
}

TEST_CASE("multiplier group of the C15 family") {
  auto c15 = resolve_group("C15").table;
  auto f = make_family(c15, 4, {blk({0, 1, 3, 7}), blk({0, 5, 10}, true)});
  auto mults = multipliers_of_family(c15, f);

  Automorphism dbl;
  dbl.perm.assign(15, 0);
  for (int i = 0; i < 15; ++i) dbl.perm[i] = static_cast<std::uint16_t>(2 * i % 15);
  CHECK(std::count(mults.begin(), mults.end(), dbl) == 1);
  CHECK(std::count(mults.begin(), mults.end(), identity_automorphism(15)) == 1);

  // closed under composition: it is a subgroup of Aut
  for (const auto& a : mults)
    for (const auto& b : mults)
      CHECK(std::count(mults.begin(), mults.end(), compose(a, b)) == 1);
  CHECK(automorphism_group(c15).size() % mults.size() == 0);
}

TEST_CASE("make_family sorts and validates shape") {
  auto c8 = resolve_group("C8").table;
  auto f = make_family(c8, 3, {blk({3, 1, 0})});
  CHECK(f.blocks[0].elems == std::vector<int>{0, 1, 3});
  CHECK(f.group_order == 8);
  CHECK(f.group_token == c8.token());
  CHECK_THROWS_AS(make_family(c8, 3, {blk({0, 1, 9})}), std::out_of_range);
  CHECK_THROWS_AS(make_family(c8, 3, {blk({0, 0, 1})}), std::invalid_argument);
}
