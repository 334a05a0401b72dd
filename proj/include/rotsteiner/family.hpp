#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rotsteiner/group.hpp"

namespace rotsteiner {

// Exact rational with normalized sign and gcd; enough head-room for
// difference-census accounting (numerators bounded by k^2 * #blocks).
struct Rational {
  long long num = 0;
  long long den = 1;

  static Rational of(long long n, long long d = 1);
  Rational operator+(const Rational& o) const;
  bool operator==(const Rational& o) const = default;
  bool is_one() const { return num == 1 && den == 1; }
  bool is_zero() const { return num == 0; }
  std::string str() const;
};

// One base block: a set of group elements, optionally including the fixed
// point "infinity". Elements are kept sorted and duplicate-free.
struct Block {
  std::vector<int> elems;
  bool has_infinity = false;

  bool operator==(const Block& o) const = default;
};

// A candidate difference family over a group of order n: blocks of size k,
// except the infinity block which carries k-1 group elements plus infinity.
// The group is referenced by order and content token so that downstream
// operations can reject mixed-group usage.
struct BaseFamily {
  int group_order = 0;
  std::uint64_t group_token = 0;
  int k = 0;
  std::vector<Block> blocks;

  bool operator==(const BaseFamily& o) const = default;
};

BaseFamily make_family(const CayleyTable& g, int k, std::vector<Block> blocks);

// Invariant difference of an ordered pair: x^{-1} y. Unaffected by left
// translation x -> gx, y -> gy. Throws std::out_of_range on bad indices.
int left_difference(const CayleyTable& g, int x, int y);

// Set stabilizer {h : h * elems == elems} of a block's group part under left
// translation, sorted. Infinity is fixed by every translation and ignored.
std::vector<int> block_stabilizer(const CayleyTable& g, const Block& b);

// Per-difference coverage weights of a family: each block B contributes
// mult_B(d) / |Stab(B)| to weights[d], where mult_B(d) counts ordered pairs
// (x, y) in B's group part with x^{-1} y = d. Blocks containing infinity
// additionally contribute |group part| / |Stab| to infinity_weight. The
// family is a valid difference family iff every nonidentity weight and the
// infinity weight equal exactly 1.
struct DifferenceCensus {
  std::vector<Rational> weights;  // indexed by element; weights[0] unused
  Rational infinity_weight;
};

DifferenceCensus difference_census(const CayleyTable& g, const BaseFamily& f);

enum class FamilyDefect {
  None,
  NoInfinityBlock,
  MultipleInfinityBlocks,
  WrongBlockSizes,
  CoverageDefect,
};

struct FamilyVerification {
  bool valid = false;
  FamilyDefect defect = FamilyDefect::None;
  std::string detail;
  std::optional<int> defect_element;        // element with bad weight (n = infinity)
  std::optional<Rational> defect_weight;
};

// Full validity check: structural shape, exact census, and an independent
// cross-check that develops the family into a point/block incidence and
// tests pair coverage directly. The two routes must agree; disagreement
// raises std::logic_error since it can only come from an internal bug.
FamilyVerification verify_family(const CayleyTable& g, int k, const BaseFamily& f);

// Arithmetic feasibility of S(2,k,v): k-1 must divide v-1 and k(k-1) must
// divide v(v-1). The group-dependent requirement (a subgroup of order k-1)
// is reported by enumeration, not here. Throws std::invalid_argument unless
// v > k >= 2.
struct AdmissibilityReport {
  bool admissible = false;
  std::vector<std::string> reasons;  // empty when admissible
};

AdmissibilityReport admissible(int v, int k);

// Canonical form under per-block left translation and block reordering:
// every block is replaced by the lexicographically smallest sorted tuple
// among its |G| translates (infinity never translates), then blocks are
// sorted as integer tuples with infinity encoded as n. Idempotent, and
// constant on translation orbits.
BaseFamily canonicalize_family(const CayleyTable& g, const BaseFamily& f);

// Flat comparable encoding of a canonical family (block entries separated
// by -1); lexicographic order on these keys is the canonical family order.
std::vector<int> family_key(const CayleyTable& g, const BaseFamily& f);

// Image of a family under a group automorphism (infinity fixed).
BaseFamily apply_automorphism(const CayleyTable& g, const Automorphism& a,
                              const BaseFamily& f);

// Partition of families into equivalence classes: two families are
// equivalent when some group automorphism maps one onto the other up to
// per-block translation and block order. Class representatives are the
// minimal canonical forms; classes are sorted by representative key, so the
// result does not depend on input order. Throws std::invalid_argument if a
// family was built over a different group.
struct EquivalenceClasses {
  std::vector<BaseFamily> representatives;
  std::vector<std::vector<int>> members;  // indices into the input list
};

EquivalenceClasses equivalence_classes(const CayleyTable& g,
                                       const std::vector<BaseFamily>& families);

// Automorphisms fixing the family up to translation and block order (the
// multiplier group of the family). Always contains the identity; closed
// under composition and inverse.
std::vector<Automorphism> multipliers_of_family(const CayleyTable& g,
                                                const BaseFamily& f);

}  // namespace rotsteiner
