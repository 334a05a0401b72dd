#include "rotsteiner/registry.hpp"

#include <array>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rotsteiner {

namespace {

GroupSpec C(int n) { return GroupSpec::cyclic(n); }
GroupSpec D(int n) { return GroupSpec::dihedral(n); }
GroupSpec Dic(int m) { return GroupSpec::dicyclic(m); }
GroupSpec prod(std::vector<GroupSpec> f) { return GroupSpec::direct_product(std::move(f)); }
GroupSpec perm(const std::string& text) { return parse_group_spec("perm:" + text); }

// SL(2,3) as the matrix action on the 8 nonzero vectors of F3^2 (faithful:
// only the identity fixes every nonzero vector... -I moves them all).
GroupSpec sl23_spec() {
  std::vector<std::array<int, 2>> pts;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      if (x || y) pts.push_back({x, y});
  auto index_of = [&](int x, int y) {
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (pts[i][0] == x && pts[i][1] == y) return static_cast<int>(i);
    throw std::logic_error("vector index lookup failed");
  };
  auto act = [&](int a, int b, int c, int d) {
    std::vector<int> p(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const int x = pts[i][0], y = pts[i][1];
      p[i] = index_of((a * x + b * y) % 3, (c * x + d * y) % 3);
    }
    return p;
  };
  // Generators [[1,1],[0,1]] and [[0,-1],[1,0]] over F3 (both det 1).
  return GroupSpec::perm_generators(8, {act(1, 1, 0, 1), act(0, 2, 1, 0)});
}

// Heisenberg group of order 27 (upper unitriangular 3x3 over F3, exponent 3)
// acting on the 27 column vectors of F3^3 via the transvections I+E12, I+E23.
GroupSpec heisenberg27_spec() {
  auto idx = [](int x, int y, int z) { return 9 * x + 3 * y + z; };
  std::vector<int> g1(27), g2(27);
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      for (int z = 0; z < 3; ++z) {
        g1[idx(x, y, z)] = idx((x + y) % 3, y, z);  // x += y
        g2[idx(x, y, z)] = idx(x, (y + z) % 3, z);  // y += z
      }
  return GroupSpec::perm_generators(27, {g1, g2});
}

std::vector<RegistryEntry> build_entries() {
  std::vector<RegistryEntry> r;
  auto add = [&](std::string name, std::string structure, int order, std::optional<int> id,
                 std::vector<std::string> aliases, std::function<GroupSpec()> spec) {
    r.push_back({std::move(name), std::move(structure), order, id, std::move(aliases),
                 std::move(spec)});
  };

  // order 6
  add("S3", "S3", 6, 1, {"D6"}, [] { return D(6); });
  add("C6", "C6", 6, 2, {"Z6"}, [] { return C(6); });

  // order 8
  add("C8", "C8", 8, 1, {"Z8"}, [] { return C(8); });
  add("C4xC2", "C4 x C2", 8, 2, {}, [] { return prod({C(4), C(2)}); });
  add("D8", "D8", 8, 3, {}, [] { return D(8); });
  add("Q8", "Q8", 8, 4, {"Dic2"}, [] { return Dic(2); });
  add("C2xC2xC2", "C2 x C2 x C2", 8, 5, {"C2^3", "E8"}, [] { return prod({C(2), C(2), C(2)}); });

  // order 12
  add("Q12", "C3 : C4", 12, 1, {"Dic3", "C3:C4"}, [] { return Dic(3); });
  add("C12", "C12", 12, 2, {"Z12"}, [] { return C(12); });
  add("A4", "A4", 12, 3, {}, [] { return perm("4:(0 1 2);(1 2 3)"); });
  add("D12", "D12", 12, 4, {}, [] { return D(12); });
  add("C6xC2", "C6 x C2", 12, 5, {}, [] { return prod({C(6), C(2)}); });

  // order 14
  add("D14", "D14", 14, 1, {}, [] { return D(14); });
  add("C14", "C14", 14, 2, {"Z14"}, [] { return C(14); });

  // order 15
  add("C15", "C15", 15, 1, {"Z15"}, [] { return C(15); });

  // order 18
  add("D18", "D18", 18, 1, {}, [] { return D(18); });
  add("C18", "C18", 18, 2, {"Z18"}, [] { return C(18); });
  add("C3xS3", "C3 x S3", 18, 3, {}, [] { return prod({C(3), D(6)}); });
  add("(C3xC3):C2", "(C3 x C3) : C2", 18, 4, {"E9:C2"},
      [] { return perm("6:(0 1 2);(3 4 5);(1 2)(4 5)"); });
  add("C6xC3", "C6 x C3", 18, 5, {"C3xC6"}, [] { return prod({C(6), C(3)}); });

  // order 20
  add("Q20", "C5 : C4 (dicyclic)", 20, 1, {"Dic5"}, [] { return Dic(5); });
  add("C20", "C20", 20, 2, {"Z20"}, [] { return C(20); });
  add("F20", "C5 : C4 (Frobenius)", 20, 3, {"C5:C4", "AGL(1,5)"},
      [] { return perm("5:(0 1 2 3 4);(1 2 4 3)"); });
  add("D20", "D20", 20, 4, {}, [] { return D(20); });
  add("C10xC2", "C10 x C2", 20, 5, {}, [] { return prod({C(10), C(2)}); });

  // order 24, catalogue ids 1..15
  add("C3:C8", "C3 : C8", 24, 1, {},
      [] { return perm("11:(0 1 2);(3 4 5 6 7 8 9 10)(1 2)"); });
  add("C24", "C24", 24, 2, {"Z24"}, [] { return C(24); });
  add("SL(2,3)", "SL(2,3)", 24, 3, {"SL23"}, sl23_spec);
  add("Q24", "C3 : Q8 (dicyclic)", 24, 4, {"Dic6", "C3:Q8"}, [] { return Dic(6); });
  add("C4xS3", "C4 x S3", 24, 5, {}, [] { return prod({C(4), D(6)}); });
  add("D24", "D24", 24, 6, {}, [] { return D(24); });
  add("C2xQ12", "C2 x (C3 : C4)", 24, 7, {"C2xDic3"}, [] { return prod({C(2), Dic(3)}); });
  add("(C6xC2):C2", "(C6 x C2) : C2", 24, 8, {},
      [] { return perm("7:(0 1 2);(3 4 5 6)(1 2);(4 6)"); });
  add("C12xC2", "C12 x C2", 24, 9, {}, [] { return prod({C(12), C(2)}); });
  add("C3xD8", "C3 x D8", 24, 10, {}, [] { return prod({C(3), D(8)}); });
  add("C3xQ8", "C3 x Q8", 24, 11, {}, [] { return prod({C(3), Dic(2)}); });
  add("S4", "S4", 24, 12, {}, [] { return perm("4:(0 1);(0 1 2 3)"); });
  add("C2xA4", "C2 x A4", 24, 13, {},
      [] { return prod({C(2), perm("4:(0 1 2);(1 2 3)")}); });
  add("C2xC2xS3", "C2 x C2 x S3", 24, 14, {"C2^2xS3"},
      [] { return prod({C(2), C(2), D(6)}); });
  add("C2xC2xC2xC3", "C2 x C2 x C2 x C3", 24, 15, {"C2^3xC3", "C6xC2xC2"},
      [] { return prod({C(2), C(2), C(2), C(3)}); });

  // order 27
  add("C27", "C27", 27, 1, {"Z27"}, [] { return C(27); });
  add("C9xC3", "C9 x C3", 27, 2, {}, [] { return prod({C(9), C(3)}); });
  add("He3", "C3^2 : C3 (Heisenberg)", 27, 3, {"UT(3,3)", "Heisenberg"}, heisenberg27_spec);
  add("C9:C3", "C9 : C3", 27, 4, {"M27"},
      [] { return perm("12:(0 1 2 3 4 5 6 7 8);(9 10 11)(1 4 7)(2 8 5)"); });
  add("C3xC3xC3", "C3 x C3 x C3", 27, 5, {"C3^3", "E27"},
      [] { return prod({C(3), C(3), C(3)}); });

  // order 40 — catalogue ids intentionally unset; fixed documented order.
  add("C40", "C40", 40, std::nullopt, {"Z40"}, [] { return C(40); });
  add("C5:C8-2", "C5 : C8 (a -> a^-1)", 40, std::nullopt, {},
      [] { return perm("13:(0 1 2 3 4);(5 6 7 8 9 10 11 12)(1 4)(2 3)"); });
  add("C5:C8-4", "C5 : C8 (a -> a^2)", 40, std::nullopt, {},
      [] { return perm("13:(0 1 2 3 4);(5 6 7 8 9 10 11 12)(1 2 4 3)"); });
  add("C20xC2", "C20 x C2", 40, std::nullopt, {}, [] { return prod({C(20), C(2)}); });
  add("C4xD10", "C4 x D10", 40, std::nullopt, {}, [] { return prod({C(4), D(10)}); });
  add("C2xQ20", "C2 x (C5 : C4)", 40, std::nullopt, {"C2xDic5"},
      [] { return prod({C(2), Dic(5)}); });
  add("C2xF20", "C2 x F20", 40, std::nullopt, {},
      [] { return prod({C(2), perm("5:(0 1 2 3 4);(1 2 4 3)")}); });
  add("C2xC2xC10", "C2 x C2 x C10", 40, std::nullopt, {"C2^2xC10"},
      [] { return prod({C(2), C(2), C(10)}); });
  add("C2xC2xD10", "C2 x C2 x D10", 40, std::nullopt, {"C2^2xD10"},
      [] { return prod({C(2), C(2), D(10)}); });
  add("C5xD8", "C5 x D8", 40, std::nullopt, {}, [] { return prod({C(5), D(8)}); });
  add("D40", "D40", 40, std::nullopt, {}, [] { return D(40); });
  add("C5:D8", "C5 : D8", 40, std::nullopt, {},
      [] { return perm("9:(0 1 2 3 4);(5 6 7 8)(1 4)(2 3);(6 8)"); });
  add("C5xQ8", "C5 x Q8", 40, std::nullopt, {}, [] { return prod({C(5), Dic(2)}); });
  add("Q40", "C5 : Q8 (dicyclic)", 40, std::nullopt, {"Dic10"}, [] { return Dic(10); });

  // order 64 stretch subset — catalogue ids intentionally unset.
  add("C64", "C64", 64, std::nullopt, {"Z64"}, [] { return C(64); });
  add("C8xC8", "C8 x C8", 64, std::nullopt, {}, [] { return prod({C(8), C(8)}); });
  add("C8:C8-3", "C8 : C8 (a -> a^3)", 64, std::nullopt, {},
      [] { return perm("16:(0 1 2 3 4 5 6 7);(8 9 10 11 12 13 14 15)(1 3)(2 6)(5 7)"); });
  add("C8:C8-5", "C8 : C8 (a -> a^5)", 64, std::nullopt, {},
      [] { return perm("16:(0 1 2 3 4 5 6 7);(8 9 10 11 12 13 14 15)(1 5)(3 7)"); });
  add("C8:C8-7", "C8 : C8 (a -> a^-1)", 64, std::nullopt, {},
      [] { return perm("16:(0 1 2 3 4 5 6 7);(8 9 10 11 12 13 14 15)(1 7)(2 6)(3 5)"); });
  add("D64", "D64", 64, std::nullopt, {}, [] { return D(64); });
  add("Q64", "Q64 (dicyclic)", 64, std::nullopt, {"Dic16"}, [] { return Dic(16); });

  return r;
}

// Lowercase, drop whitespace, fold the UTF-8 multiplication sign to 'x' and
// the semidirect sign to ':' so registry lookups survive typeset names.
std::string normalize_name(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s.compare(i, 2, "\xc3\x97") == 0) {  // multiplication sign
      out.push_back('x');
      i += 2;
    } else if (s.compare(i, 3, "\xe2\x8b\x8a") == 0) {  // right semidirect sign
      out.push_back(':');
      i += 3;
    } else {
      const unsigned char c = static_cast<unsigned char>(s[i]);
      if (!std::isspace(c)) out.push_back(static_cast<char>(std::tolower(c)));
      ++i;
    }
  }
  return out;
}

}  // namespace

const std::vector<RegistryEntry>& registry_entries() {
  static const std::vector<RegistryEntry> entries = build_entries();
  return entries;
}

const RegistryEntry* find_registry_entry(const std::string& name) {
  const std::string key = normalize_name(name);
  if (key.empty()) return nullptr;
  for (const RegistryEntry& e : registry_entries()) {
    if (normalize_name(e.name) == key) return &e;
    for (const std::string& a : e.aliases)
      if (normalize_name(a) == key) return &e;
  }
  return nullptr;
}

std::vector<const RegistryEntry*> groups_of_order(int order) {
  std::vector<const RegistryEntry*> out;
  for (const RegistryEntry& e : registry_entries())
    if (e.order == order) out.push_back(&e);
  return out;
}

ResolvedGroup resolve_group(const std::string& text) {
  // Fixture overrides first: each non-comment line of the override file is
  // "<name> <group spec text>"; matching names shadow the built-in registry.
  if (const char* env = std::getenv(kFixturesEnvVar); env && *env) {
    std::ifstream in(env);
    if (!in) throw std::invalid_argument(std::string("cannot open fixture file: ") + env);
    const std::string key = normalize_name(text);
    std::string line;
    while (std::getline(in, line)) {
      const std::size_t first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      std::istringstream ls(line);
      std::string name;
      ls >> name;
      std::string spec_text;
      std::getline(ls, spec_text);
      if (normalize_name(name) == key) {
        ResolvedGroup rg{make_group(parse_group_spec(spec_text)), name, spec_text};
        const std::size_t lead = rg.structure.find_first_not_of(" \t");
        if (lead != std::string::npos) rg.structure = rg.structure.substr(lead);
        return rg;
      }
    }
  }
  if (const RegistryEntry* e = find_registry_entry(text))
    return {make_group(e->spec()), e->name, e->structure};
  return {make_group(parse_group_spec(text)), text, text};
}

}  // namespace rotsteiner
