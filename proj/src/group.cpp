#include "rotsteiner/group.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rotsteiner {

namespace {

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

int CayleyTable::elem_order(int x) const {
  if (x < 0 || x >= n_) throw std::out_of_range("element index out of range");
  return ord_[x];
}

std::vector<int> CayleyTable::order_census() const {
  std::vector<int> census(ord_.begin(), ord_.end());
  std::sort(census.begin(), census.end());
  return census;
}

CayleyTable CayleyTable::from_valid_flat(int n, std::vector<std::uint16_t> flat) {
  CayleyTable g;
  g.n_ = n;
  g.tab_ = std::move(flat);
  g.inv_.assign(n, 0);
  g.ord_.assign(n, 0);
  for (int a = 0; a < n; ++a) {
    bool found = false;
    for (int b = 0; b < n; ++b) {
      if (g.mul(a, b) == 0) {
        g.inv_[a] = static_cast<std::uint16_t>(b);
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("table has no inverse for some element");
  }
  for (int a = 0; a < n; ++a) {
    int x = a, m = 1;
    while (x != 0) {
      x = g.mul(x, a);
      ++m;
      if (m > n) throw std::logic_error("element order exceeds group order");
    }
    g.ord_[a] = static_cast<std::uint16_t>(m);
  }
  g.abelian_ = true;
  for (int a = 0; a < n && g.abelian_; ++a)
    for (int b = a + 1; b < n; ++b)
      if (g.mul(a, b) != g.mul(b, a)) {
        g.abelian_ = false;
        break;
      }
  std::uint64_t h = fnv1a(&n, sizeof n, 1469598103934665603ULL);
  g.token_ = fnv1a(g.tab_.data(), g.tab_.size() * sizeof(std::uint16_t), h);
  return g;
}

const char* table_axiom_name(TableAxiom axiom) {
  switch (axiom) {
    case TableAxiom::None: return "None";
    case TableAxiom::NonSquare: return "NonSquare";
    case TableAxiom::EntryOutOfRange: return "EntryOutOfRange";
    case TableAxiom::NoIdentity: return "NoIdentity";
    case TableAxiom::NotLatin: return "NotLatin";
    case TableAxiom::NotAssociative: return "NotAssociative";
  }
  return "?";
}

TableResult validate_cayley_table(const std::vector<std::vector<int>>& raw) {
  TableResult res;
  auto fail = [&res](TableAxiom a, std::string detail) -> TableResult& {
    res.report.ok = false;
    res.report.violated = a;
    res.report.detail = std::move(detail);
    return res;
  };

  const int n = static_cast<int>(raw.size());
  if (n == 0) return fail(TableAxiom::NonSquare, "table has no rows");
  if (n > kMaxGroupOrder)
    return fail(TableAxiom::NonSquare,
                "order " + std::to_string(n) + " exceeds cap " + std::to_string(kMaxGroupOrder));
  for (int i = 0; i < n; ++i)
    if (static_cast<int>(raw[i].size()) != n)
      return fail(TableAxiom::NonSquare, "row " + std::to_string(i) + " has " +
                                             std::to_string(raw[i].size()) + " entries, expected " +
                                             std::to_string(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (raw[i][j] < 0 || raw[i][j] >= n)
        return fail(TableAxiom::EntryOutOfRange, "entry [" + std::to_string(i) + "][" +
                                                     std::to_string(j) + "] = " +
                                                     std::to_string(raw[i][j]));
  for (int x = 0; x < n; ++x) {
    if (raw[0][x] != x)
      return fail(TableAxiom::NoIdentity,
                  "index 0 is not a left identity: 0*" + std::to_string(x) + " = " +
                      std::to_string(raw[0][x]));
    if (raw[x][0] != x)
      return fail(TableAxiom::NoIdentity,
                  "index 0 is not a right identity: " + std::to_string(x) + "*0 = " +
                      std::to_string(raw[x][0]));
  }
  // Latin square: rows and columns are permutations.
  std::vector<char> seen(n);
  for (int i = 0; i < n; ++i) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int j = 0; j < n; ++j) {
      if (seen[raw[i][j]]++)
        return fail(TableAxiom::NotLatin,
                    "row " + std::to_string(i) + " repeats " + std::to_string(raw[i][j]));
    }
    std::fill(seen.begin(), seen.end(), 0);
    for (int j = 0; j < n; ++j) {
      if (seen[raw[j][i]]++)
        return fail(TableAxiom::NotLatin,
                    "column " + std::to_string(i) + " repeats " + std::to_string(raw[j][i]));
    }
  }
  std::vector<std::uint16_t> flat(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) flat[static_cast<std::size_t>(i) * n + j] =
        static_cast<std::uint16_t>(raw[i][j]);
  // Associativity on the packed table (cache-friendlier than raw vectors).
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int ab = flat[static_cast<std::size_t>(a) * n + b];
      for (int c = 0; c < n; ++c) {
        const int bc = flat[static_cast<std::size_t>(b) * n + c];
        if (flat[static_cast<std::size_t>(ab) * n + c] !=
            flat[static_cast<std::size_t>(a) * n + bc])
          return fail(TableAxiom::NotAssociative,
                      "(" + std::to_string(a) + "*" + std::to_string(b) + ")*" +
                          std::to_string(c) + " != " + std::to_string(a) + "*(" +
                          std::to_string(b) + "*" + std::to_string(c) + ")");
      }
    }
  res.report.ok = true;
  res.table = CayleyTable::from_valid_flat(n, std::move(flat));
  return res;
}

GroupSpec GroupSpec::cyclic(int n) {
  GroupSpec s;
  s.kind = Kind::Cyclic;
  s.n = n;
  return s;
}

GroupSpec GroupSpec::direct_product(std::vector<GroupSpec> factors) {
  GroupSpec s;
  s.kind = Kind::DirectProduct;
  s.factors = std::move(factors);
  return s;
}

GroupSpec GroupSpec::dihedral(int order) {
  GroupSpec s;
  s.kind = Kind::Dihedral;
  s.n = order;
  return s;
}

GroupSpec GroupSpec::dicyclic(int m) {
  GroupSpec s;
  s.kind = Kind::Dicyclic;
  s.n = m;
  return s;
}

GroupSpec GroupSpec::perm_generators(int degree, std::vector<std::vector<int>> gens) {
  GroupSpec s;
  s.kind = Kind::PermGenerators;
  s.degree = degree;
  s.generators = std::move(gens);
  return s;
}

GroupSpec GroupSpec::table_file(std::string path) {
  GroupSpec s;
  s.kind = Kind::TableFile;
  s.path = std::move(path);
  return s;
}

namespace {

void check_order_cap(long long n) {
  if (n < 1 || n > kMaxGroupOrder)
    throw std::invalid_argument("group order " + std::to_string(n) + " outside [1, " +
                                std::to_string(kMaxGroupOrder) + "]");
}

CayleyTable make_cyclic(int n) {
  check_order_cap(n);
  std::vector<std::uint16_t> flat(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      flat[static_cast<std::size_t>(a) * n + b] = static_cast<std::uint16_t>((a + b) % n);
  return CayleyTable::from_valid_flat(n, std::move(flat));
}

CayleyTable make_product(const CayleyTable& a, const CayleyTable& b) {
  const long long n = static_cast<long long>(a.order()) * b.order();
  check_order_cap(n);
  const int na = a.order(), nb = b.order(), nn = static_cast<int>(n);
  std::vector<std::uint16_t> flat(static_cast<std::size_t>(nn) * nn);
  for (int x = 0; x < nn; ++x)
    for (int y = 0; y < nn; ++y) {
      const int xa = x / nb, xb = x % nb, ya = y / nb, yb = y % nb;
      flat[static_cast<std::size_t>(x) * nn + y] =
          static_cast<std::uint16_t>(a.mul(xa, ya) * nb + b.mul(xb, yb));
    }
  (void)na;
  return CayleyTable::from_valid_flat(nn, std::move(flat));
}

// Dihedral group of order n = 2h: indices [0,h) are rotations r^i, indices
// [h,2h) are reflections s r^(i-h), with s r^a s = r^-a.
CayleyTable make_dihedral(int order) {
  if (order < 2 || order % 2 != 0)
    throw std::invalid_argument("dihedral order must be even and >= 2");
  check_order_cap(order);
  const int h = order / 2, n = order;
  auto idx = [&](bool refl, int a) { return (refl ? h : 0) + ((a % h) + h) % h; };
  std::vector<std::uint16_t> flat(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const bool xr = x >= h, yr = y >= h;
      const int xa = xr ? x - h : x, ya = yr ? y - h : y;
      int out;
      if (!xr && !yr) out = idx(false, xa + ya);        // r^a r^b
      else if (!xr && yr) out = idx(true, ya - xa);     // r^a (s r^b) = s r^(b-a)
      else if (xr && !yr) out = idx(true, xa + ya);     // (s r^a) r^b
      else out = idx(false, ya - xa);                   // (s r^a)(s r^b) = r^(b-a)
      flat[static_cast<std::size_t>(x) * n + y] = static_cast<std::uint16_t>(out);
    }
  return CayleyTable::from_valid_flat(n, std::move(flat));
}

// Dicyclic group of order 4m: <a, b | a^{2m}=1, b^2=a^m, b a b^-1 = a^-1>.
// Indices [0,2m) are a^i, indices [2m,4m) are a^i b.
CayleyTable make_dicyclic(int m) {
  if (m < 1) throw std::invalid_argument("dicyclic parameter must be >= 1");
  const int n = 4 * m, two_m = 2 * m;
  check_order_cap(n);
  auto amod = [&](int a) { return ((a % two_m) + two_m) % two_m; };
  std::vector<std::uint16_t> flat(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const bool xb = x >= two_m, yb = y >= two_m;
      const int xa = xb ? x - two_m : x, ya = yb ? y - two_m : y;
      int out;
      if (!xb && !yb) out = amod(xa + ya);                     // a^i a^j
      else if (!xb && yb) out = two_m + amod(xa + ya);         // a^i (a^j b)
      else if (xb && !yb) out = two_m + amod(xa - ya);         // (a^i b) a^j = a^(i-j) b
      else out = amod(xa - ya + m);                            // (a^i b)(a^j b) = a^(i-j+m)
      flat[static_cast<std::size_t>(x) * n + y] = static_cast<std::uint16_t>(out);
    }
  return CayleyTable::from_valid_flat(n, std::move(flat));
}

CayleyTable make_perm_group(int degree, const std::vector<std::vector<int>>& gens) {
  if (degree < 1 || degree > 4096)
    throw std::invalid_argument("permutation degree outside [1, 4096]");
  if (gens.empty()) throw std::invalid_argument("no generators given");
  for (const auto& p : gens) {
    if (static_cast<int>(p.size()) != degree)
      throw std::invalid_argument("generator degree mismatch");
    std::vector<char> seen(degree, 0);
    for (int v : p) {
      if (v < 0 || v >= degree || seen[v]++)
        throw std::invalid_argument("generator is not a permutation");
    }
  }
  std::vector<int> id(degree);
  std::iota(id.begin(), id.end(), 0);
  std::set<std::vector<int>> closure;
  closure.insert(id);
  std::vector<std::vector<int>> queue = {id};
  while (!queue.empty()) {
    std::vector<int> cur = std::move(queue.back());
    queue.pop_back();
    for (const auto& gen : gens) {
      std::vector<int> next(degree);
      for (int i = 0; i < degree; ++i) next[i] = gen[cur[i]];  // gen applied after cur
      if (closure.insert(next).second) {
        if (static_cast<int>(closure.size()) > kMaxGroupOrder)
          throw std::invalid_argument("generated group exceeds order cap " +
                                      std::to_string(kMaxGroupOrder));
        queue.push_back(std::move(next));
      }
    }
  }
  // Sorted element list; the identity sorts first, giving it index 0.
  std::vector<std::vector<int>> elems(closure.begin(), closure.end());
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < static_cast<int>(elems.size()); ++i) index[elems[i]] = i;
  const int n = static_cast<int>(elems.size());
  if (elems[0] != id) throw std::logic_error("identity permutation not at index 0");
  std::vector<std::uint16_t> flat(static_cast<std::size_t>(n) * n);
  std::vector<int> prod(degree);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      for (int i = 0; i < degree; ++i) prod[i] = elems[x][elems[y][i]];
      flat[static_cast<std::size_t>(x) * n + y] = static_cast<std::uint16_t>(index.at(prod));
    }
  return CayleyTable::from_valid_flat(n, std::move(flat));
}

CayleyTable make_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open table file: " + path);
  int n = 0;
  if (!(in >> n) || n < 1 || n > kMaxGroupOrder)
    throw std::invalid_argument("bad order header in table file: " + path);
  std::vector<std::vector<int>> raw(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(in >> raw[i][j]))
        throw std::invalid_argument("truncated table file: " + path);
  // Locate a two-sided identity and re-index it to 0 (swap relabeling) so
  // that externally produced tables meet the index-0 convention.
  int e = -1;
  for (int cand = 0; cand < n && e < 0; ++cand) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x)
      ok = raw[cand][x] >= 0 && raw[cand][x] < n && raw[cand][x] == x && raw[x][cand] == x;
    if (ok) e = cand;
  }
  if (e > 0) {
    auto relab = [&](int x) { return x == e ? 0 : (x == 0 ? e : x); };
    std::vector<std::vector<int>> fixed(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) fixed[relab(i)][relab(j)] = relab(raw[i][j]);
    raw = std::move(fixed);
  }
  TableResult res = validate_cayley_table(raw);
  if (!res.report.ok)
    throw std::invalid_argument("invalid table in " + path + ": " +
                                table_axiom_name(res.report.violated) + " (" +
                                res.report.detail + ")");
  return *std::move(res.table);
}

}  // namespace

CayleyTable make_group(const GroupSpec& spec) {
  switch (spec.kind) {
    case GroupSpec::Kind::Cyclic:
      return make_cyclic(spec.n);
    case GroupSpec::Kind::DirectProduct: {
      if (spec.factors.empty()) throw std::invalid_argument("empty direct product");
      CayleyTable acc = make_group(spec.factors[0]);
      for (std::size_t i = 1; i < spec.factors.size(); ++i)
        acc = make_product(acc, make_group(spec.factors[i]));
      return acc;
    }
    case GroupSpec::Kind::Dihedral:
      return make_dihedral(spec.n);
    case GroupSpec::Kind::Dicyclic:
      return make_dicyclic(spec.n);
    case GroupSpec::Kind::PermGenerators:
      return make_perm_group(spec.degree, spec.generators);
    case GroupSpec::Kind::TableFile:
      return make_from_file(spec.path);
  }
  throw std::invalid_argument("unknown group spec kind");
}

std::vector<int> parse_permutation_cycles(int degree, const std::string& text) {
  std::vector<int> perm(degree);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ','))
      ++i;
  };
  skip_ws();
  while (i < text.size()) {
    if (text[i] != '(') throw std::invalid_argument("expected '(' in cycle notation: " + text);
    ++i;
    std::vector<int> cyc;
    skip_ws();
    while (i < text.size() && text[i] != ')') {
      if (!std::isdigit(static_cast<unsigned char>(text[i])))
        throw std::invalid_argument("bad cycle notation: " + text);
      int v = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
        v = v * 10 + (text[i++] - '0');
      if (v < 0 || v >= degree)
        throw std::invalid_argument("cycle point " + std::to_string(v) + " out of range");
      cyc.push_back(v);
      skip_ws();
    }
    if (i >= text.size()) throw std::invalid_argument("unterminated cycle: " + text);
    ++i;  // ')'
    for (std::size_t j = 0; j < cyc.size(); ++j) {
      int from = cyc[j], to = cyc[(j + 1) % cyc.size()];
      if (perm[from] != from)
        throw std::invalid_argument("point " + std::to_string(from) + " appears twice");
      perm[from] = to;
    }
    skip_ws();
  }
  std::vector<char> seen(degree, 0);
  for (int v : perm)
    if (seen[v]++) throw std::invalid_argument("cycles do not form a permutation: " + text);
  return perm;
}

namespace {

int parse_positive_int(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("expected a number");
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("expected a number, got '" + s + "'");
  long long v = std::stoll(s);
  if (v < 1 || v > kMaxGroupOrder) throw std::invalid_argument("number out of range: " + s);
  return static_cast<int>(v);
}

GroupSpec parse_atom(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty group spec");
  if (text.rfind("file:", 0) == 0) return GroupSpec::table_file(text.substr(5));
  if (text.rfind("perm:", 0) == 0) {
    const std::string rest = text.substr(5);
    const std::size_t colon = rest.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("perm spec needs 'perm:<degree>:<cycles>': " + text);
    const int degree = parse_positive_int(rest.substr(0, colon));
    std::vector<std::vector<int>> gens;
    std::stringstream body(rest.substr(colon + 1));
    std::string part;
    while (std::getline(body, part, ';'))
      if (part.find_first_not_of(" \t") != std::string::npos)
        gens.push_back(parse_permutation_cycles(degree, part));
    if (gens.empty()) throw std::invalid_argument("perm spec has no generators: " + text);
    return GroupSpec::perm_generators(degree, std::move(gens));
  }
  const char head = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  if (head == 'C' || head == 'D' || head == 'Q') {
    const int n = parse_positive_int(text.substr(1));
    if (head == 'C') return GroupSpec::cyclic(n);
    if (head == 'D') return GroupSpec::dihedral(n);
    if (n % 4 != 0)
      throw std::invalid_argument("dicyclic order must be divisible by 4: " + text);
    return GroupSpec::dicyclic(n / 4);
  }
  throw std::invalid_argument("cannot parse group spec '" + text + "'");
}

}  // namespace

GroupSpec parse_group_spec(const std::string& text) {
  // perm: and file: atoms keep their body verbatim (cycle notation uses
  // spaces, paths may contain anything); products of those go through the
  // registry instead. Everything else is whitespace-stripped and split on
  // 'x'/'X' into direct-product factors.
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos) {
    const std::size_t last = text.find_last_not_of(" \t\r\n");
    const std::string trimmed = text.substr(first, last - first + 1);
    if (trimmed.rfind("perm:", 0) == 0 || trimmed.rfind("file:", 0) == 0)
      return parse_atom(trimmed);
  }
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == 'x' || c == 'X') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  if (parts.size() == 1) return parse_atom(parts[0]);
  std::vector<GroupSpec> factors;
  factors.reserve(parts.size());
  for (const auto& p : parts) factors.push_back(parse_atom(p));
  return GroupSpec::direct_product(std::move(factors));
}

std::vector<int> subgroup_closure(const CayleyTable& g, const std::vector<int>& gens, int cap) {
  const int n = g.order();
  std::vector<char> in(n, 0);
  std::vector<int> elems;
  auto add = [&](int x) {
    if (!in[x]) {
      in[x] = 1;
      elems.push_back(x);
    }
  };
  add(0);
  for (int x : gens) {
    if (x < 0 || x >= n) throw std::out_of_range("generator out of range");
    add(x);
  }
  // Worklist closure under products; inverses follow in a finite group.
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = 0; j < elems.size(); ++j) {
      add(g.mul(elems[i], elems[j]));
      add(g.mul(elems[j], elems[i]));
      if (cap >= 0 && static_cast<int>(elems.size()) > cap) return {};
    }
  }
  std::sort(elems.begin(), elems.end());
  return elems;
}

namespace {

void subgroup_search(const CayleyTable& g, int d, const std::vector<int>& current,
                     int min_next, std::set<std::vector<int>>& found) {
  const int n = g.order();
  std::vector<char> in(n, 0);
  for (int x : current) in[x] = 1;
  for (int x = min_next; x < n; ++x) {
    if (in[x]) continue;
    std::vector<int> gens = current;
    gens.push_back(x);
    std::vector<int> closed = subgroup_closure(g, gens, d);
    if (closed.empty()) continue;  // exceeded d
    if (static_cast<int>(closed.size()) == d) {
      if (d % static_cast<int>(closed.size()) == 0) found.insert(closed);
    } else if (d % static_cast<int>(closed.size()) == 0) {
      subgroup_search(g, d, closed, x + 1, found);
    }
  }
}

}  // namespace

std::vector<std::vector<int>> subgroups_of_order(const CayleyTable& g, int d) {
  const int n = g.order();
  if (d < 1 || d > n || n % d != 0) return {};
  if (d == 1) return {{0}};
  std::set<std::vector<int>> found;
  subgroup_search(g, d, {0}, 1, found);
  return {found.begin(), found.end()};
}

Automorphism identity_automorphism(int n) {
  Automorphism a;
  a.perm.resize(n);
  for (int i = 0; i < n; ++i) a.perm[i] = static_cast<std::uint16_t>(i);
  return a;
}

Automorphism compose(const Automorphism& f, const Automorphism& g) {
  Automorphism r;
  r.perm.resize(g.perm.size());
  for (std::size_t i = 0; i < g.perm.size(); ++i) r.perm[i] = f.perm[g.perm[i]];
  return r;
}

Automorphism inverse_of(const Automorphism& f) {
  Automorphism r;
  r.perm.resize(f.perm.size());
  for (std::size_t i = 0; i < f.perm.size(); ++i) r.perm[f.perm[i]] = static_cast<std::uint16_t>(i);
  return r;
}

bool is_automorphism(const CayleyTable& g, const Automorphism& f) {
  const int n = g.order();
  if (f.degree() != n) return false;
  std::vector<char> seen(n, 0);
  for (int i = 0; i < n; ++i) {
    if (f.perm[i] >= n || seen[f.perm[i]]++) return false;
  }
  if (f.perm[0] != 0) return false;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (f.perm[g.mul(a, b)] != g.mul(f.perm[a], f.perm[b])) return false;
  return true;
}

namespace {

// Greedy minimal generating chain: stage j is the closure of gens[0..j].
struct GeneratingChain {
  std::vector<int> gens;
  std::vector<std::vector<int>> stages;  // sorted element lists, last = whole group
};

GeneratingChain generating_chain(const CayleyTable& g) {
  GeneratingChain chain;
  const int n = g.order();
  std::vector<int> closed = {0};
  std::vector<char> in(n, 0);
  in[0] = 1;
  while (static_cast<int>(closed.size()) < n) {
    int x = 0;
    while (in[x]) ++x;
    chain.gens.push_back(x);
    closed = subgroup_closure(g, chain.gens);
    std::fill(in.begin(), in.end(), 0);
    for (int y : closed) in[y] = 1;
    chain.stages.push_back(closed);
  }
  return chain;
}

// BFS parent expressions for every element of a stage: elem = parent * gen.
struct StageWords {
  std::vector<int> elems;          // stage elements, BFS order from identity
  std::vector<int> parent;         // index into elems, -1 for identity
  std::vector<int> via_gen;        // generator index used, -1 for identity
  std::vector<int> pos_in_stage;   // group element -> position or -1
};

StageWords stage_words(const CayleyTable& g, const std::vector<int>& stage,
                       const std::vector<int>& gens, int gens_used) {
  StageWords w;
  const int n = g.order();
  w.pos_in_stage.assign(n, -1);
  std::vector<char> in_stage(n, 0);
  for (int x : stage) in_stage[x] = 1;
  w.elems.push_back(0);
  w.parent.push_back(-1);
  w.via_gen.push_back(-1);
  w.pos_in_stage[0] = 0;
  for (std::size_t head = 0; head < w.elems.size(); ++head) {
    for (int gi = 0; gi < gens_used; ++gi) {
      const int next = g.mul(w.elems[head], gens[gi]);
      if (w.pos_in_stage[next] >= 0) continue;
      if (!in_stage[next]) throw std::logic_error("stage not closed under its generators");
      w.pos_in_stage[next] = static_cast<int>(w.elems.size());
      w.elems.push_back(next);
      w.parent.push_back(static_cast<int>(head));
      w.via_gen.push_back(gi);
    }
  }
  if (w.elems.size() != stage.size()) throw std::logic_error("stage words incomplete");
  return w;
}

struct AutSearch {
  const CayleyTable& g;
  const GeneratingChain& chain;
  std::vector<StageWords> words;  // per stage
  std::vector<int> images;        // chosen generator images
  std::vector<Automorphism> out;
};

// Extends generator images to the whole stage via BFS words, then checks
// injectivity and multiplicativity inside the stage.
bool stage_consistent(AutSearch& s, int stage_idx, std::vector<int>& img_out) {
  const CayleyTable& g = s.g;
  const StageWords& w = s.words[stage_idx];
  const int n = g.order();
  std::vector<int> img(w.elems.size(), -1);
  img[0] = 0;
  for (std::size_t i = 1; i < w.elems.size(); ++i)
    img[i] = g.mul(img[w.parent[i]], s.images[w.via_gen[i]]);
  std::vector<char> used(n, 0);
  for (std::size_t i = 0; i < img.size(); ++i)
    if (used[img[i]]++) return false;
  for (std::size_t i = 0; i < w.elems.size(); ++i)
    for (std::size_t j = 0; j < w.elems.size(); ++j) {
      const int prod = g.mul(w.elems[i], w.elems[j]);
      if (img[w.pos_in_stage[prod]] != g.mul(img[i], img[j])) return false;
    }
  img_out = img;
  return true;
}

void aut_backtrack(AutSearch& s, int stage_idx) {
  const CayleyTable& g = s.g;
  const int n = g.order();
  if (stage_idx == static_cast<int>(s.chain.gens.size())) {
    // All generators mapped; the last stage is the whole group.
    std::vector<int> img;
    if (!stage_consistent(s, stage_idx - 1, img)) return;
    Automorphism a;
    a.perm.resize(n);
    const StageWords& w = s.words.back();
    for (std::size_t i = 0; i < w.elems.size(); ++i)
      a.perm[w.elems[i]] = static_cast<std::uint16_t>(img[i]);
    s.out.push_back(std::move(a));
    return;
  }
  const int gen = s.chain.gens[stage_idx];
  const int want_order = g.elem_order(gen);
  for (int y = 0; y < n; ++y) {
    if (g.elem_order(y) != want_order) continue;
    s.images[stage_idx] = y;
    std::vector<int> img;
    if (stage_consistent(s, stage_idx, img)) aut_backtrack(s, stage_idx + 1);
  }
}

}  // namespace

std::vector<Automorphism> automorphism_group(const CayleyTable& g) {
  const int n = g.order();
  if (n == 1) return {identity_automorphism(1)};
  GeneratingChain chain = generating_chain(g);
  AutSearch s{g, chain, {}, std::vector<int>(chain.gens.size(), -1), {}};
  s.words.reserve(chain.stages.size());
  for (std::size_t j = 0; j < chain.stages.size(); ++j)
    s.words.push_back(stage_words(g, chain.stages[j], chain.gens, static_cast<int>(j) + 1));
  aut_backtrack(s, 0);
  std::sort(s.out.begin(), s.out.end());
  return s.out;
}

}  // namespace rotsteiner
