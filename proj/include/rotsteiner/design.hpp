#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rotsteiner/family.hpp"
#include "rotsteiner/group.hpp"

namespace rotsteiner {

// Design-side point cap (points are stored in uint8 and block masks in two
// 64-bit words).
inline constexpr int kMaxDesignPoints = 128;
inline constexpr int kMaxBlockSize = 8;

// A block design on points {0..v-1}: blocks are sorted k-subsets, the block
// list itself sorted. For developed families, point v-1 is the fixed point.
struct Design {
  int v = 0;
  int k = 0;
  std::vector<std::vector<std::uint8_t>> blocks;

  bool operator==(const Design& o) const = default;
};

// Develops a base family into the design whose blocks are all distinct left
// translates g*B (infinity staying put, encoded as point |G|). Throws
// std::invalid_argument on structurally hopeless input (empty family, block
// size out of range, group too large for the point cap); coverage defects
// are NOT checked here - validate_steiner reports those.
Design develop(const CayleyTable& g, const BaseFamily& f);

struct SteinerReport {
  bool valid = false;
  std::string detail;                      // first defect, human-readable
  std::optional<std::pair<int, int>> pair; // offending point pair, if any
  int count = 0;                           // its coverage count
};

// Checks the S(2,k,v) axioms directly: every block a k-subset in range and
// every point pair covered exactly once.
SteinerReport validate_steiner(const Design& d);

// Pairwise invariant: for points p != q, the number of unordered disjoint
// block pairs {A, B} with p in A and q in B. Returned as a flat sorted
// multiset over all point pairs; isomorphic designs get equal fingerprints.
std::vector<int> fingerprint(const Design& d);

struct DesignAutomorphisms {
  long long order = 0;
  std::vector<std::vector<std::uint8_t>> perms;  // all automorphisms
  std::vector<int> point_orbits;                 // orbit id per point
};

// Full automorphism group by point-image backtracking over fingerprint-
// compatible candidates with incremental block-image consistency.
DesignAutomorphisms design_automorphisms(const Design& d);

long long automorphism_order(const Design& d);

// Isomorphism certificate. Two designs are isomorphic iff their canonical
// codes are equal. The code is the minimum over all relabelings of the
// sorted list of packed block words (points of a block packed descending,
// one byte per point), found by branch-and-bound over partial relabelings
// with automorphism-orbit pruning.
struct IsoCertificate {
  std::vector<int> fprint;                              // fingerprint multiset
  long long aut_order = 0;
  std::vector<std::uint64_t> code;                      // canonical form
  std::vector<std::vector<std::uint8_t>> canonical_blocks;
};

IsoCertificate design_certificate(const Design& d);

// Partition into isomorphism classes. Designs are first bucketed by the
// cheap invariants (fingerprint, automorphism order); canonical codes are
// only computed inside buckets with more than one member. Classes are
// sorted by (fingerprint, aut order, code), so the partition does not
// depend on input order. All designs must share (v, k); throws
// std::invalid_argument otherwise.
struct IsoClasses {
  std::vector<std::vector<int>> classes;   // member indices, each sorted
  std::vector<std::vector<int>> fprints;   // per class
  std::vector<long long> aut_orders;       // per class
};

IsoClasses isomorphism_classes(const std::vector<Design>& designs,
                               int thread_count = 1);

}  // namespace rotsteiner
