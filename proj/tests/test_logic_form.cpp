#include <doctest.h>

#include <string>
#include <vector>

#include "geoforge/logic_form.hpp"
#include "geoforge/rng.hpp"
#include "support/test_util.hpp"

using namespace geoforge;

TEST_CASE("parse nested form") {
  LogicTerm t = parse_logic_form("PointLiesOnLine(D, Line(A, B))");
  REQUIRE(t.is_node());
  CHECK(t.functor() == "PointLiesOnLine");
  REQUIRE(t.args().size() == 2);
  CHECK(t.args()[0].text() == "D");
  CHECK(t.args()[1].functor() == "Line");
  CHECK(t.args()[1].args()[0].text() == "A");
  CHECK(t.args()[1].args()[1].text() == "B");
}

TEST_CASE("parse bare identifier") {
  LogicTerm t = parse_logic_form("A");
  CHECK(t.is_leaf());
  CHECK(t.text() == "A");
  CHECK(t.leaf_kind() == LogicTerm::LeafKind::Identifier);
}

TEST_CASE("parse with arbitrary whitespace") {
  LogicTerm t = parse_logic_form("Equals(LengthOf(Line(C,B)),5)");
  CHECK(print_logic_form(t) == "Equals(LengthOf(Line(C, B)), 5)");
  LogicTerm spread = parse_logic_form("  Equals ( LengthOf( Line( C , B ) ) ,  5 ) ");
  CHECK(t == spread);
}

TEST_CASE("numeric and expression leaves") {
  CHECK(parse_logic_form("5").leaf_kind() == LogicTerm::LeafKind::Numeric);
  CHECK(parse_logic_form("16.0").leaf_kind() == LogicTerm::LeafKind::Numeric);
  CHECK(parse_logic_form("-3.5").leaf_kind() == LogicTerm::LeafKind::Numeric);
  // Neither numeral nor identifier: stored opaquely, not rejected.
  LogicTerm t = parse_logic_form("Equals(LengthOf(Line(A, B)), 5x+3)");
  CHECK(t.args()[1].leaf_kind() == LogicTerm::LeafKind::Expression);
  CHECK(t.args()[1].text() == "5x+3");
}

TEST_CASE("print canonical spacing") {
  CHECK(print_logic_form(LogicTerm::leaf("5")) == "5");
  LogicTerm line = LogicTerm::node("Line", {LogicTerm::leaf("A"), LogicTerm::leaf("B")});
  CHECK(print_logic_form(line) == "Line(A, B)");
}

TEST_CASE("syntax errors carry offset and hint") {
  CHECK_THROWS_AS(parse_logic_form("Line(A"), SyntaxError);
  CHECK_THROWS_AS(parse_logic_form("Line(A,,B)"), SyntaxError);
  CHECK_THROWS_AS(parse_logic_form("Line()"), SyntaxError);
  CHECK_THROWS_AS(parse_logic_form("Line(A, B)) extra"), SyntaxError);
  CHECK_THROWS_AS(parse_logic_form(""), SyntaxError);
  CHECK_THROWS_AS(parse_logic_form("A B"), SyntaxError);

  try {
    parse_logic_form("Line(A");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 6);
    CHECK(e.expected() == "')' or ','");
  }
  try {
    parse_logic_form("Line(A, B) garbage");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 11);
    CHECK(e.expected() == "end of input");
  }
}

TEST_CASE("classification against the standard catalog") {
  const auto& catalog = PredicateCatalog::standard();
  CHECK(classify_term(parse_logic_form("Triangle(A, B, C)"), catalog) == PredicateClass::Shape);
  CHECK(classify_term(parse_logic_form("Perpendicular(Line(A, C), Line(C, B))"), catalog) ==
        PredicateClass::Relation);
  CHECK(classify_term(parse_logic_form("Equals(LengthOf(Line(C, B)), 5)"), catalog) ==
        PredicateClass::Measurement);
  CHECK(classify_term(parse_logic_form("Frobnicate(X)"), catalog) == PredicateClass::Unknown);
  CHECK(classify_term(parse_logic_form("5"), catalog) == PredicateClass::Numeric);
}

TEST_CASE("all annotation lines of the worked example parse and classify") {
  const auto& catalog = PredicateCatalog::standard();
  for (const auto& line : testutil::altitude_diagram_forms()) {
    LogicTerm t = parse_logic_form(line);
    CHECK(classify_term(t, catalog) != PredicateClass::Unknown);
    // Round-trip, modulo whitespace normalization.
    CHECK(parse_logic_form(print_logic_form(t)) == t);
  }
}

TEST_CASE("round-trip property over generated ASTs") {
  Rng rng(20240811);
  for (int i = 0; i < 2000; ++i) {
    LogicTerm t = testutil::random_term(rng);
    LogicTerm back = parse_logic_form(print_logic_form(t));
    REQUIRE(back == t);
  }
}

TEST_CASE("parser is total on random byte strings") {
  Rng rng(777);
  for (int i = 0; i < 2000; ++i) {
    std::string bytes;
    std::size_t len = rng.below(64);
    for (std::size_t b = 0; b < len; ++b)
      bytes.push_back(static_cast<char>(rng.below(256)));
    try {
      LogicTerm t = parse_logic_form(bytes);
      (void)t;
    } catch (const SyntaxError&) {
      // expected for malformed input
    }
  }
}

TEST_CASE("file parser collects per-line errors") {
  std::string content =
      "Triangle(A, B, C)\n"
      "\n"
      "Line(A\n"
      "Equals(LengthOf(Line(A, B)), 4)\n";
  LogicFormFile file = parse_logic_form_lines(content);
  CHECK(file.forms.size() == 2);
  CHECK(file.forms.count(1) == 1);
  CHECK(file.forms.count(4) == 1);
  REQUIRE(file.errors.size() == 1);
  CHECK(file.errors.count(3) == 1);
}

TEST_CASE("catalog covers the core predicates and flags unknowns") {
  const auto& catalog = PredicateCatalog::standard();
  for (const char* name :
       {"Similar", "Triangle", "Equals", "LengthOf", "Line", "PointLiesOnLine", "Perpendicular"})
    CHECK(catalog.contains(name));
  CHECK_FALSE(catalog.contains("Frobnicate"));
  auto entry = catalog.lookup("Line");
  REQUIRE(entry.has_value());
  CHECK(entry->min_arity == 2);
  CHECK(entry->max_arity == 2);
}
