#include "rotsteiner/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rotsteiner {

namespace {

struct Tokenizer {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool peek(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
};

// Reads one entry: a nonnegative integer, "inf" in any case, or the UTF-8
// infinity sign. Returns the group order n for infinity.
int parse_entry(Tokenizer& tk, int n) {
  tk.skip_ws();
  const std::string& s = tk.text;
  if (tk.pos >= s.size())
    throw FamilyParseError(ParseDefect::SyntaxError, "unexpected end of family text");
  if (s.compare(tk.pos, 3, "\xe2\x88\x9e") == 0) {  // infinity sign
    tk.pos += 3;
    return n;
  }
  if (tk.pos + 3 <= s.size() &&
      std::tolower(static_cast<unsigned char>(s[tk.pos])) == 'i' &&
      std::tolower(static_cast<unsigned char>(s[tk.pos + 1])) == 'n' &&
      std::tolower(static_cast<unsigned char>(s[tk.pos + 2])) == 'f') {
    tk.pos += 3;
    return n;
  }
  if (!std::isdigit(static_cast<unsigned char>(s[tk.pos])))
    throw FamilyParseError(ParseDefect::SyntaxError,
                           "expected a number or infinity at position " + std::to_string(tk.pos));
  long long val = 0;
  while (tk.pos < s.size() && std::isdigit(static_cast<unsigned char>(s[tk.pos]))) {
    val = val * 10 + (s[tk.pos] - '0');
    if (val > kMaxGroupOrder)
      throw FamilyParseError(ParseDefect::IndexOutOfRange,
                             "element " + std::to_string(val) + " out of range");
    ++tk.pos;
  }
  if (val > n)
    throw FamilyParseError(ParseDefect::IndexOutOfRange,
                           "element " + std::to_string(val) + " exceeds group order " +
                               std::to_string(n));
  return static_cast<int>(val);
}

}  // namespace

BaseFamily parse_family(const std::string& text, const CayleyTable& g) {
  const int n = g.order();
  Tokenizer tk{text};
  if (!tk.eat('['))
    throw FamilyParseError(ParseDefect::SyntaxError, "family must start with '['");
  std::vector<Block> blocks;
  bool infinity_seen = false;
  if (!tk.peek(']')) {
    do {
      if (!tk.eat('['))
        throw FamilyParseError(ParseDefect::SyntaxError, "block must start with '['");
      Block blk;
      if (!tk.peek(']')) {
        do {
          const int e = parse_entry(tk, n);
          if (e == n) {
            if (infinity_seen)
              throw FamilyParseError(ParseDefect::MultipleInfinity,
                                     "infinity appears more than once in the family");
            infinity_seen = true;
            blk.has_infinity = true;
          } else {
            blk.elems.push_back(e);
          }
        } while (tk.eat(','));
      }
      if (!tk.eat(']'))
        throw FamilyParseError(ParseDefect::SyntaxError, "block not closed with ']'");
      std::sort(blk.elems.begin(), blk.elems.end());
      for (std::size_t i = 1; i < blk.elems.size(); ++i)
        if (blk.elems[i] == blk.elems[i - 1])
          throw FamilyParseError(ParseDefect::SyntaxError,
                                 "duplicate element " + std::to_string(blk.elems[i]) +
                                     " in a block");
      blocks.push_back(std::move(blk));
    } while (tk.eat(','));
  }
  if (!tk.eat(']'))
    throw FamilyParseError(ParseDefect::SyntaxError, "family not closed with ']'");
  if (!tk.done())
    throw FamilyParseError(ParseDefect::SyntaxError, "trailing characters after family");
  // Block size: the widest block determines k (the infinity block carries
  // k-1 group elements plus the fixed point).
  int k = 0;
  for (const Block& b : blocks)
    k = std::max(k, static_cast<int>(b.elems.size()) + (b.has_infinity ? 1 : 0));
  return make_family(g, k, std::move(blocks));
}

std::string serialize_family(const CayleyTable& g, const BaseFamily& f) {
  std::ostringstream out;
  out << "[";
  for (std::size_t bi = 0; bi < f.blocks.size(); ++bi) {
    if (bi) out << ", ";
    out << "[";
    const Block& b = f.blocks[bi];
    for (std::size_t i = 0; i < b.elems.size(); ++i) {
      if (i) out << ", ";
      out << b.elems[i];
    }
    if (b.has_infinity) {
      if (!b.elems.empty()) out << ", ";
      out << g.order();
    }
    out << "]";
  }
  out << "]";
  return out.str();
}

std::vector<BaseFamily> parse_family_lines(const std::string& text, const CayleyTable& g) {
  std::vector<BaseFamily> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(parse_family(line, g));
  }
  return out;
}

CayleyTable load_cayley_file(const std::string& path) {
  return make_group(GroupSpec::table_file(path));
}

std::string serialize_cayley_table(const CayleyTable& g) {
  std::ostringstream out;
  const int n = g.order();
  out << n << "\n";
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (b) out << " ";
      out << g.mul(a, b);
    }
    out << "\n";
  }
  return out.str();
}

Design parse_design(const std::string& text) {
  std::istringstream in(text);
  Design d;
  long long b = 0;
  if (!(in >> d.v >> d.k >> b)) throw std::invalid_argument("bad design header, want 'v k b'");
  if (d.v < 2 || d.v > kMaxDesignPoints)
    throw std::invalid_argument("design point count out of range");
  if (d.k < 2 || d.k > kMaxBlockSize) throw std::invalid_argument("design block size out of range");
  if (b < 0 || b > 65535) throw std::invalid_argument("design block count out of range");
  d.blocks.reserve(static_cast<std::size_t>(b));
  for (long long bi = 0; bi < b; ++bi) {
    std::vector<std::uint8_t> blk(d.k);
    for (int i = 0; i < d.k; ++i) {
      int p = 0;
      if (!(in >> p)) throw std::invalid_argument("truncated design file");
      if (p < 0 || p >= d.v) throw std::invalid_argument("design point out of range");
      blk[i] = static_cast<std::uint8_t>(p);
    }
    std::sort(blk.begin(), blk.end());
    d.blocks.push_back(std::move(blk));
  }
  std::sort(d.blocks.begin(), d.blocks.end());
  return d;
}

std::string serialize_design(const Design& d) {
  std::ostringstream out;
  out << d.v << " " << d.k << " " << d.blocks.size() << "\n";
  for (const auto& blk : d.blocks) {
    for (std::size_t i = 0; i < blk.size(); ++i) {
      if (i) out << " ";
      out << static_cast<int>(blk[i]);
    }
    out << "\n";
  }
  return out.str();
}

Design load_design_file(const std::string& path) { return parse_design(read_text_file(path)); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

}  // namespace rotsteiner
