#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rotsteiner/design.hpp"
#include "rotsteiner/io.hpp"
#include "rotsteiner/registry.hpp"

#include <filesystem>
#include <string>
#include <unistd.h>

using namespace rotsteiner;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("rotsteiner_io_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const char* name) const { return (path / name).string(); }
};

ParseDefect kind_of(const std::string& text, const CayleyTable& g) {
  try {
    parse_family(text, g);
  } catch (const FamilyParseError& e) {
    return e.kind;
  }
  FAIL("expected a parse error for: ", text);
  return ParseDefect::SyntaxError;
}

}  // namespace

TEST_CASE("family parsing accepts all infinity spellings") {
  auto c15 = resolve_group("C15").table;
  auto a = parse_family("[[0,1,3,7],[0,5,10,15]]", c15);
  auto b = parse_family("[[0,1,3,7],[0,5,10,inf]]", c15);
  auto c = parse_family("[[0,1,3,7],[0,5,10,INF]]", c15);
  auto d = parse_family("[[0, 1, 3, 7], [0, 5, 10, \xe2\x88\x9e]]", c15);
  CHECK(a == b);
  CHECK(a == c);
  CHECK(a == d);
  CHECK(a.k == 4);
  REQUIRE(a.blocks.size() == 2);
  CHECK(a.blocks[1].has_infinity);
  CHECK(a.blocks[1].elems == std::vector<int>{0, 5, 10});
  CHECK_FALSE(a.blocks[0].has_infinity);
}

TEST_CASE("family parsing is whitespace and order tolerant") {
  auto c8 = resolve_group("C8").table;
  auto f = parse_family("  [ [ 3,1 , 0 ] , [ 8 , 4, 0 ] ]  ", c8);
  CHECK(f.blocks[0].elems == std::vector<int>{0, 1, 3});
  CHECK(f.blocks[1].elems == std::vector<int>{0, 4});
  CHECK(f.blocks[1].has_infinity);
}

TEST_CASE("family parse errors carry their defect kind") {
  auto c8 = resolve_group("C8").table;
  CHECK(kind_of("", c8) == ParseDefect::SyntaxError);
  CHECK(kind_of("[[0,1", c8) == ParseDefect::SyntaxError);
  CHECK(kind_of("[[0,1,]]", c8) == ParseDefect::SyntaxError);
  CHECK(kind_of("[0,1,3]", c8) == ParseDefect::SyntaxError);
  CHECK(kind_of("[[0,1,3]] trailing", c8) == ParseDefect::SyntaxError);
  CHECK(kind_of("[[0,0,3]]", c8) == ParseDefect::SyntaxError);  // duplicate

  CHECK(kind_of("[[0,1,9]]", c8) == ParseDefect::IndexOutOfRange);
  CHECK(kind_of("[[0,1,99999]]", c8) == ParseDefect::IndexOutOfRange);

  CHECK(kind_of("[[0,4,inf],[1,2,inf]]", c8) == ParseDefect::MultipleInfinity);
  CHECK(kind_of("[[0,4,inf,8]]", c8) == ParseDefect::MultipleInfinity);
}

TEST_CASE("serialize then parse is the identity") {
  auto c15 = resolve_group("C15").table;
  auto f = parse_family("[[0,1,3,7],[0,5,10,inf]]", c15);
  auto text = serialize_family(c15, f);
  CHECK(parse_family(text, c15) == f);
  // serialized form uses the numeric infinity alias
  CHECK(text.find("15") != std::string::npos);

  auto q8 = resolve_group("Q8").table;
  auto g = parse_family("[[0,1,3]]", q8);
  CHECK(parse_family(serialize_family(q8, g), q8) == g);
}

TEST_CASE("family line files skip comments and blanks") {
  auto c8 = resolve_group("C8").table;
  std::string text =
      "# header\n"
      "\n"
      "[[0,1,3],[0,4,inf]]\n"
      "   \n"
      "[[0,1,5],[0,4,inf]]\n"
      "# trailing note\n";
  auto fams = parse_family_lines(text, c8);
  REQUIRE(fams.size() == 2);
  CHECK(fams[0].blocks[0].elems == std::vector<int>{0, 1, 3});
  CHECK(fams[1].blocks[0].elems == std::vector<int>{0, 1, 5});
}

TEST_CASE("cayley table files round trip") {
  TempDir tmp;
  auto q8 = resolve_group("Q8").table;
  write_text_file(tmp.file("q8.tbl"), serialize_cayley_table(q8));
  auto back = load_cayley_file(tmp.file("q8.tbl"));
  CHECK(back.order() == 8);
  CHECK(back.token() == q8.token());
}

TEST_CASE("table files with identity elsewhere are re-indexed by swap") {
  TempDir tmp;
  // Z3 with labels chosen so the identity sits at index 2: relabel 0<->2
  // in the standard table. Loading must give back a group with identity 0.
  std::string text =
      "3\n"
      "1 2 0\n"
      "2 0 1\n"
      "0 1 2\n";
  write_text_file(tmp.file("z3.tbl"), text);
  auto g = load_cayley_file(tmp.file("z3.tbl"));
  CHECK(g.order() == 3);
  for (int x = 0; x < 3; ++x) {
    CHECK(g.mul(0, x) == x);
    CHECK(g.mul(x, 0) == x);
  }
  CHECK(g.order_census() == std::vector<int>{1, 3, 3});
}

TEST_CASE("bad table files are rejected with context") {
  TempDir tmp;
  write_text_file(tmp.file("bad.tbl"), "2\n0 1\n1 1\n");
  CHECK_THROWS_AS(load_cayley_file(tmp.file("bad.tbl")), std::invalid_argument);
  CHECK_THROWS(load_cayley_file(tmp.file("missing.tbl")));
}

TEST_CASE("design files round trip") {
  auto c8 = resolve_group("C8").table;
  auto f = parse_family("[[0,1,3],[0,4,inf]]", c8);
  auto d = develop(c8, f);

  auto text = serialize_design(d);
  CHECK(parse_design(text) == d);

  TempDir tmp;
  write_text_file(tmp.file("d.txt"), text);
  CHECK(load_design_file(tmp.file("d.txt")) == d);
}

TEST_CASE("design parsing validates the header") {
  CHECK_THROWS(parse_design(""));
  CHECK_THROWS(parse_design("9 3\n"));                  // block count missing
  CHECK_THROWS(parse_design("9 3 1\n0 1 99\n"));        // point out of range
  CHECK_THROWS(parse_design("9 3 2\n0 1 2\n"));         // fewer blocks than claimed
  auto d = parse_design("9 3 2\n0 1 2\n3 4 5\n");
  CHECK(d.v == 9);
  CHECK(d.blocks.size() == 2);
}

TEST_CASE("text file helpers") {
  TempDir tmp;
  write_text_file(tmp.file("x.txt"), "hello\n");
  CHECK(read_text_file(tmp.file("x.txt")) == "hello\n");
  CHECK_THROWS(read_text_file(tmp.file("nope.txt")));
}
