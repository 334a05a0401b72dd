#include "rotsteiner/family.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rotsteiner/design.hpp"

namespace rotsteiner {

Rational Rational::of(long long n, long long d) {
  if (d == 0) throw std::invalid_argument("zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const long long g = std::gcd(n < 0 ? -n : n, d);
  Rational r;
  r.num = g ? n / g : n;
  r.den = g ? d / g : 1;
  return r;
}

Rational Rational::operator+(const Rational& o) const {
  return Rational::of(num * o.den + o.num * den, den * o.den);
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

namespace {

void check_block_shape(const CayleyTable& g, const Block& b) {
  const int n = g.order();
  for (std::size_t i = 0; i < b.elems.size(); ++i) {
    if (b.elems[i] < 0 || b.elems[i] >= n)
      throw std::out_of_range("block element out of range");
    if (i > 0 && b.elems[i] <= b.elems[i - 1])
      throw std::invalid_argument("block elements must be sorted and distinct");
  }
}

void check_family_shape(const CayleyTable& g, const BaseFamily& f) {
  if (f.group_token != g.token() || f.group_order != g.order())
    throw std::invalid_argument("family was built over a different group");
  for (const Block& b : f.blocks) check_block_shape(g, b);
}

}  // namespace

BaseFamily make_family(const CayleyTable& g, int k, std::vector<Block> blocks) {
  BaseFamily f;
  f.group_order = g.order();
  f.group_token = g.token();
  f.k = k;
  f.blocks = std::move(blocks);
  for (Block& b : f.blocks) {
    std::sort(b.elems.begin(), b.elems.end());
    check_block_shape(g, b);
  }
  return f;
}

int left_difference(const CayleyTable& g, int x, int y) {
  const int n = g.order();
  if (x < 0 || x >= n || y < 0 || y >= n)
    throw std::out_of_range("left_difference argument out of range");
  return g.mul(g.inv(x), y);
}

std::vector<int> block_stabilizer(const CayleyTable& g, const Block& b) {
  check_block_shape(g, b);
  const int n = g.order();
  std::vector<char> in(n, 0);
  for (int x : b.elems) in[x] = 1;
  std::vector<int> stab;
  if (b.elems.empty()) {
    stab.resize(n);
    std::iota(stab.begin(), stab.end(), 0);
    return stab;
  }
  for (int h = 0; h < n; ++h) {
    bool fixes = true;
    for (int x : b.elems)
      if (!in[g.mul(h, x)]) {
        fixes = false;
        break;
      }
    if (fixes) stab.push_back(h);
  }
  return stab;
}

DifferenceCensus difference_census(const CayleyTable& g, const BaseFamily& f) {
  check_family_shape(g, f);
  const int n = g.order();
  DifferenceCensus census;
  census.weights.assign(n, Rational::of(0));
  census.infinity_weight = Rational::of(0);
  for (const Block& b : f.blocks) {
    const long long stab = static_cast<long long>(block_stabilizer(g, b).size());
    for (int x : b.elems)
      for (int y : b.elems) {
        if (x == y) continue;
        const int d = left_difference(g, x, y);
        census.weights[d] = census.weights[d] + Rational::of(1, stab);
      }
    if (b.has_infinity)
      census.infinity_weight =
          census.infinity_weight + Rational::of(static_cast<long long>(b.elems.size()), stab);
  }
  return census;
}

FamilyVerification verify_family(const CayleyTable& g, int k, const BaseFamily& f) {
  check_family_shape(g, f);
  FamilyVerification rep;
  auto fail = [&rep](FamilyDefect d, std::string detail) -> FamilyVerification& {
    rep.valid = false;
    rep.defect = d;
    rep.detail = std::move(detail);
    return rep;
  };
  if (k < 2) return fail(FamilyDefect::WrongBlockSizes, "block size must be >= 2");

  int infinity_blocks = 0;
  for (const Block& b : f.blocks)
    if (b.has_infinity) ++infinity_blocks;
  if (infinity_blocks == 0)
    return fail(FamilyDefect::NoInfinityBlock, "no block contains infinity");
  if (infinity_blocks > 1)
    return fail(FamilyDefect::MultipleInfinityBlocks,
                std::to_string(infinity_blocks) + " blocks contain infinity");
  for (const Block& b : f.blocks) {
    const int want = b.has_infinity ? k - 1 : k;
    if (static_cast<int>(b.elems.size()) != want)
      return fail(FamilyDefect::WrongBlockSizes,
                  "block has " + std::to_string(b.elems.size()) + " group elements, expected " +
                      std::to_string(want));
  }

  // Exact census route.
  const DifferenceCensus census = difference_census(g, f);
  bool census_ok = census.infinity_weight.is_one();
  for (int d = 1; d < g.order() && census_ok; ++d) census_ok = census.weights[d].is_one();

  // Independent route: develop and check pair coverage directly.
  const Design dev = develop(g, f);
  const bool develop_ok = validate_steiner(dev).valid;
  if (census_ok != develop_ok)
    throw std::logic_error("internal error: census and development verdicts disagree");

  if (!census_ok) {
    for (int d = 1; d < g.order(); ++d)
      if (!census.weights[d].is_one()) {
        rep.defect_element = d;
        rep.defect_weight = census.weights[d];
        return fail(FamilyDefect::CoverageDefect, "difference " + std::to_string(d) +
                                                      " has weight " + census.weights[d].str());
      }
    rep.defect_element = g.order();
    rep.defect_weight = census.infinity_weight;
    return fail(FamilyDefect::CoverageDefect,
                "infinity has weight " + census.infinity_weight.str());
  }
  rep.valid = true;
  return rep;
}

AdmissibilityReport admissible(int v, int k) {
  if (k < 2 || v <= k) throw std::invalid_argument("need v > k >= 2");
  AdmissibilityReport rep;
  if ((v - 1) % (k - 1) != 0)
    rep.reasons.push_back("k-1 = " + std::to_string(k - 1) + " does not divide v-1 = " +
                          std::to_string(v - 1));
  if ((static_cast<long long>(v) * (v - 1)) % (static_cast<long long>(k) * (k - 1)) != 0)
    rep.reasons.push_back("k(k-1) = " + std::to_string(k * (k - 1)) +
                          " does not divide v(v-1) = " + std::to_string(static_cast<long long>(v) * (v - 1)));
  rep.admissible = rep.reasons.empty();
  return rep;
}

namespace {

// Lexicographically smallest sorted tuple among the |G| left translates of
// a block's group part. Only translates bringing some element to 0 can win,
// so just |elems| candidates need sorting.
std::vector<int> min_translate(const CayleyTable& g, const std::vector<int>& elems) {
  if (elems.empty()) return {};
  std::vector<int> best;
  std::vector<int> cur(elems.size());
  for (int e : elems) {
    const int t = g.inv(e);
    for (std::size_t i = 0; i < elems.size(); ++i) cur[i] = g.mul(t, elems[i]);
    std::sort(cur.begin(), cur.end());
    if (best.empty() || cur < best) best = cur;
  }
  return best;
}

std::vector<int> block_sort_key(const CayleyTable& g, const Block& b) {
  std::vector<int> key = b.elems;
  if (b.has_infinity) key.push_back(g.order());
  return key;
}

}  // namespace

BaseFamily canonicalize_family(const CayleyTable& g, const BaseFamily& f) {
  check_family_shape(g, f);
  BaseFamily out = f;
  for (Block& b : out.blocks) b.elems = min_translate(g, b.elems);
  std::sort(out.blocks.begin(), out.blocks.end(), [&](const Block& a, const Block& b) {
    return block_sort_key(g, a) < block_sort_key(g, b);
  });
  return out;
}

std::vector<int> family_key(const CayleyTable& g, const BaseFamily& f) {
  std::vector<int> key;
  for (const Block& b : f.blocks) {
    for (int e : b.elems) key.push_back(e);
    if (b.has_infinity) key.push_back(g.order());
    key.push_back(-1);  // block separator; sorts before any element
  }
  return key;
}

BaseFamily apply_automorphism(const CayleyTable& g, const Automorphism& a,
                              const BaseFamily& f) {
  check_family_shape(g, f);
  if (a.degree() != g.order()) throw std::invalid_argument("automorphism degree mismatch");
  BaseFamily out = f;
  for (Block& b : out.blocks) {
    for (int& e : b.elems) e = a(e);
    std::sort(b.elems.begin(), b.elems.end());
  }
  return out;
}

namespace {

// Minimal canonical key over the automorphism orbit of a family.
std::pair<std::vector<int>, BaseFamily> orbit_min_key(const CayleyTable& g,
                                                      const std::vector<Automorphism>& auts,
                                                      const BaseFamily& f) {
  std::vector<int> best_key;
  BaseFamily best;
  for (const Automorphism& a : auts) {
    BaseFamily img = canonicalize_family(g, apply_automorphism(g, a, f));
    std::vector<int> key = family_key(g, img);
    if (best_key.empty() || key < best_key) {
      best_key = std::move(key);
      best = std::move(img);
    }
  }
  return {best_key, best};
}

}  // namespace

EquivalenceClasses equivalence_classes(const CayleyTable& g,
                                       const std::vector<BaseFamily>& families) {
  const std::vector<Automorphism> auts = automorphism_group(g);
  std::map<std::vector<int>, std::pair<BaseFamily, std::vector<int>>> classes;
  for (std::size_t i = 0; i < families.size(); ++i) {
    auto [key, rep] = orbit_min_key(g, auts, families[i]);
    auto it = classes.find(key);
    if (it == classes.end())
      classes.emplace(std::move(key), std::make_pair(std::move(rep),
                                                     std::vector<int>{static_cast<int>(i)}));
    else
      it->second.second.push_back(static_cast<int>(i));
  }
  EquivalenceClasses out;
  for (auto& [key, value] : classes) {
    out.representatives.push_back(std::move(value.first));
    out.members.push_back(std::move(value.second));
  }
  return out;
}

std::vector<Automorphism> multipliers_of_family(const CayleyTable& g, const BaseFamily& f) {
  const std::vector<int> base_key = family_key(g, canonicalize_family(g, f));
  std::vector<Automorphism> out;
  for (const Automorphism& a : automorphism_group(g)) {
    BaseFamily img = canonicalize_family(g, apply_automorphism(g, a, f));
    if (family_key(g, img) == base_key) out.push_back(a);
  }
  return out;
}

}  // namespace rotsteiner
