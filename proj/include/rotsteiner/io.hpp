#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rotsteiner/design.hpp"
#include "rotsteiner/family.hpp"
#include "rotsteiner/group.hpp"

namespace rotsteiner {

enum class ParseDefect {
  SyntaxError,
  IndexOutOfRange,
  MultipleInfinity,
};

struct FamilyParseError : std::runtime_error {
  ParseDefect kind;
  FamilyParseError(ParseDefect k, const std::string& msg)
      : std::runtime_error(msg), kind(k) {}
};

// Parses the bracketed family syntax, e.g. "[[0, 1, 3, 7], [0, 5, 10, 15]]".
// Infinity may be written as the group order, "inf" (any case) or the UTF-8
// infinity sign. Throws FamilyParseError on bad input.
BaseFamily parse_family(const std::string& text, const CayleyTable& g);

// Inverse of parse_family; infinity is serialized as the group order so the
// output is machine-round-trippable. parse(serialize(f)) == f for canonical
// families.
std::string serialize_family(const CayleyTable& g, const BaseFamily& f);

// One family per non-empty, non-comment line.
std::vector<BaseFamily> parse_family_lines(const std::string& text, const CayleyTable& g);

// Cayley table file: first line n, then n rows of n entries (row g lists
// g*h for h = 0..n-1). If the identity is not element 0 the table is
// re-indexed on load by swapping index 0 with the identity. Throws
// std::invalid_argument naming the violated axiom on malformed input.
CayleyTable load_cayley_file(const std::string& path);
std::string serialize_cayley_table(const CayleyTable& g);

// Design file: header "v k b", then b lines of k sorted point indices.
Design parse_design(const std::string& text);
std::string serialize_design(const Design& d);
Design load_design_file(const std::string& path);

std::string read_text_file(const std::string& path);   // throws on missing file
void write_text_file(const std::string& path, const std::string& content);

}  // namespace rotsteiner
