#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rotsteiner {

// Hard cap on supported group orders: keeps table storage and the O(n^3)
// associativity check for imported tables within sane bounds.
inline constexpr int kMaxGroupOrder = 1024;

// A finite group of order n given by its full multiplication table.
// Element 0 is always the identity. Instances are immutable after
// construction and safe to share across threads.
class CayleyTable {
 public:
  CayleyTable() = default;

  int order() const { return n_; }
  int mul(int a, int b) const { return tab_[static_cast<std::size_t>(a) * n_ + b]; }
  int inv(int a) const { return inv_[a]; }

  // Smallest m >= 1 with x^m = identity. Throws std::out_of_range on bad x.
  int elem_order(int x) const;

  bool is_abelian() const { return abelian_; }

  // Content hash over (n, table); used to catch mixed-group usage downstream.
  std::uint64_t token() const { return token_; }

  // Sorted multiset of element orders, e.g. Q8 -> {1,2,4,4,4,4,4,4}.
  std::vector<int> order_census() const;

  // Builds from a flat row-major table already known to satisfy the group
  // axioms with identity at index 0. Derives inverses and element orders;
  // throws std::logic_error if the table is grossly broken (no inverse row).
  static CayleyTable from_valid_flat(int n, std::vector<std::uint16_t> flat);

 private:
  int n_ = 0;
  std::vector<std::uint16_t> tab_, inv_, ord_;
  bool abelian_ = true;
  std::uint64_t token_ = 0;
};

enum class TableAxiom {
  None,
  NonSquare,        // ragged rows or zero rows
  EntryOutOfRange,  // entry outside [0, n)
  NoIdentity,       // index 0 is not a two-sided identity
  NotLatin,         // some row or column is not a permutation
  NotAssociative,   // (ab)c != a(bc) for some triple
};

const char* table_axiom_name(TableAxiom axiom);

struct TableValidation {
  bool ok = false;
  TableAxiom violated = TableAxiom::None;
  std::string detail;  // human-readable description of the first violation
};

struct TableResult {
  std::optional<CayleyTable> table;  // set iff report.ok
  TableValidation report;
};

// Checks the group axioms on a raw table (identity at index 0, Latin square,
// associativity; inverses follow from these for finite tables) and returns
// either the packed table or a report naming the first violated axiom.
TableResult validate_cayley_table(const std::vector<std::vector<int>>& raw);

// Recipe for building a group. Direct products use lexicographic pair
// indexing: (a, b) -> a * |B| + b.
struct GroupSpec {
  enum class Kind {
    Cyclic,          // Z_n
    DirectProduct,   // factors[0] x factors[1] x ...
    Dihedral,        // of order n (n even >= 2)
    Dicyclic,        // parameter m, order 4m (m=2 gives Q8)
    PermGenerators,  // closure of explicit permutations on `degree` points
    TableFile,       // Cayley table from a text file
  };

  Kind kind = Kind::Cyclic;
  int n = 1;       // cyclic order / dihedral order / dicyclic parameter
  int degree = 0;  // PermGenerators only
  std::vector<GroupSpec> factors;
  std::vector<std::vector<int>> generators;
  std::string path;

  static GroupSpec cyclic(int n);
  static GroupSpec direct_product(std::vector<GroupSpec> factors);
  static GroupSpec dihedral(int order);
  static GroupSpec dicyclic(int m);
  static GroupSpec perm_generators(int degree, std::vector<std::vector<int>> gens);
  static GroupSpec table_file(std::string path);
};

// Realizes a spec as a concrete table. Throws std::invalid_argument on a bad
// spec (odd dihedral order, non-permutation generator, order cap exceeded,
// unreadable or invalid table file).
CayleyTable make_group(const GroupSpec& spec);

// Parses the CLI syntax for anonymous group specs:
//   C<n>                     cyclic
//   D<n>                     dihedral of order n
//   Q<n>                     dicyclic of order n (4 | n)
//   <spec>x<spec>            direct product (left-associative)
//   perm:<deg>:<cycles>;...  permutation generators in cycle notation
//   file:<path>              Cayley table file
// Registry names (S4, SL(2,3), ...) are resolved by the registry layer, not
// here. Throws std::invalid_argument on syntax errors.
GroupSpec parse_group_spec(const std::string& text);

// Cycle notation like "(0 1 2)(3 4)" to an explicit image vector on
// [0, degree). Fixed points may be omitted. Throws std::invalid_argument on
// malformed text, out-of-range points, or repeated points.
std::vector<int> parse_permutation_cycles(int degree, const std::string& text);

// All subgroups of the given order, each as a sorted element list, the list
// of lists sorted lexicographically. Empty when d does not divide |G|.
std::vector<std::vector<int>> subgroups_of_order(const CayleyTable& g, int d);

// Closure of a set of elements under multiplication, sorted. The optional
// cap aborts early (returns empty) once the closure exceeds it.
std::vector<int> subgroup_closure(const CayleyTable& g, const std::vector<int>& gens,
                                  int cap = -1);

// A group automorphism as the permutation it induces on element indices.
struct Automorphism {
  std::vector<std::uint16_t> perm;

  int operator()(int x) const { return perm[x]; }
  int degree() const { return static_cast<int>(perm.size()); }

  bool operator==(const Automorphism& o) const = default;
  bool operator<(const Automorphism& o) const { return perm < o.perm; }
};

Automorphism identity_automorphism(int n);
Automorphism compose(const Automorphism& f, const Automorphism& g);  // f after g
Automorphism inverse_of(const Automorphism& f);
bool is_automorphism(const CayleyTable& g, const Automorphism& f);

// The full automorphism group as a sorted, duplicate-free permutation list.
// Backtracks over images of a greedily chosen minimal generating set,
// pruning by element order and partial-homomorphism consistency.
std::vector<Automorphism> automorphism_group(const CayleyTable& g);

}  // namespace rotsteiner
