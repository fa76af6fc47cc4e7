#include <doctest.h>

#include <algorithm>

#include "geoforge/scene.hpp"
#include "support/test_util.hpp"

using namespace geoforge;

namespace {

bool has_shape(const GeoScene& scene, const std::string& kind,
               std::vector<std::string> vertices) {
  for (const auto& s : scene.shapes())
    if (s.kind == kind && s.vertices == vertices) return true;
  return false;
}

Verdict ask(const GeoScene& scene, const std::string& prop) {
  return query(scene, parse_logic_form(prop));
}

}  // namespace

TEST_CASE("worked-example scene contents") {
  GeoScene scene = testutil::altitude_scene();

  CHECK(scene.points() == std::set<std::string>{"A", "B", "C", "D"});
  CHECK(scene.shapes().size() == 3);
  CHECK(has_shape(scene, "Triangle", {"A", "B", "C"}));
  CHECK(has_shape(scene, "Triangle", {"C", "B", "D"}));
  CHECK(has_shape(scene, "Triangle", {"A", "C", "B"}));

  int perp = 0, similar = 0, incidence = 0;
  for (const auto& r : scene.relations()) {
    if (r.kind == RelationKind::Perpendicular) ++perp;
    if (r.kind == RelationKind::Similar) ++similar;
    if (r.kind == RelationKind::Incidence) ++incidence;
  }
  CHECK(perp == 2);
  CHECK(similar == 1);
  CHECK(incidence == 1);

  CHECK(scene.collinear("D", "A", "B"));
  REQUIRE(scene.measurements().size() == 3);
  CHECK(scene.measurements().at("LengthOf(Line(B, C))").quantity.value == Rational(5));
  CHECK(scene.measurements().at("LengthOf(Line(C, D))").quantity.value == Rational(3));
  CHECK(scene.measurements().at("LengthOf(Line(B, D))").quantity.value == Rational(4));
  CHECK(scene.unrecognized().empty());
}

TEST_CASE("empty input yields empty scene") {
  GeoScene scene = build_scene({});
  CHECK(scene.empty());
  CHECK(enumerate_facts(scene).empty());
}

TEST_CASE("conflicting measurements raise InconsistencyError") {
  std::vector<LogicTerm> forms = {
      parse_logic_form("Equals(LengthOf(Line(A, B)), 3)"),
      parse_logic_form("Equals(LengthOf(Line(A, B)), 4)"),
  };
  CHECK_THROWS_AS(build_scene(forms), InconsistencyError);
  // Same value twice is fine.
  std::vector<LogicTerm> dup = {
      parse_logic_form("Equals(LengthOf(Line(A, B)), 3)"),
      parse_logic_form("Equals(LengthOf(Line(B, A)), 3)"),
  };
  CHECK(build_scene(dup).measurements().size() == 1);
}

TEST_CASE("presence queries use vertex-set naming") {
  GeoScene scene = testutil::altitude_scene();
  CHECK(ask(scene, "Triangle(A, C, B)") == Verdict::True);
  CHECK(ask(scene, "Triangle(B, A, C)") == Verdict::True);
  CHECK(ask(scene, "Triangle(D, B, C)") == Verdict::True);
  CHECK(ask(scene, "Triangle(A, B, D)") == Verdict::False);
  CHECK(ask(scene, "Triangle(X, Y, Z)") == Verdict::Undetermined);
}

TEST_CASE("incidence and relation queries") {
  GeoScene scene = testutil::altitude_scene();
  CHECK(ask(scene, "PointLiesOnLine(D, Line(A, B))") == Verdict::True);
  CHECK(ask(scene, "PointLiesOnLine(D, Line(B, A))") == Verdict::True);
  CHECK(ask(scene, "PointLiesOnLine(D, Line(B, C))") == Verdict::False);
  CHECK(ask(scene, "PointLiesOnLine(E, Line(A, B))") == Verdict::Undetermined);

  CHECK(ask(scene, "Perpendicular(Line(A, C), Line(C, B))") == Verdict::True);
  CHECK(ask(scene, "Perpendicular(Line(C, B), Line(A, C))") == Verdict::True);
  CHECK(ask(scene, "Perpendicular(Line(A, B), Line(C, D))") == Verdict::False);
  CHECK(ask(scene, "Parallel(Line(A, C), Line(C, B))") == Verdict::False);

  CHECK(ask(scene, "Similar(Triangle(A, B, C), Triangle(C, B, D))") == Verdict::True);
  CHECK(ask(scene, "Similar(Triangle(C, B, D), Triangle(A, B, C))") == Verdict::True);
  CHECK(ask(scene, "Similar(Triangle(A, B, C), Triangle(A, C, B))") == Verdict::False);
}

TEST_CASE("triangle permutation equivalence") {
  GeoScene scene = testutil::altitude_scene();
  std::vector<std::string> perm = {"A", "B", "C"};
  std::sort(perm.begin(), perm.end());
  do {
    std::string prop = "Triangle(" + perm[0] + ", " + perm[1] + ", " + perm[2] + ")";
    CHECK(ask(scene, prop) == Verdict::True);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("relation symmetry property") {
  Rng rng(99);
  for (int i = 0; i < 40; ++i) {
    GeoScene scene = testutil::random_scene(rng);
    for (const auto& rel : scene.relations()) {
      if (rel.prop.args().size() != 2) continue;
      if (rel.kind == RelationKind::Incidence) continue;
      LogicTerm flipped =
          LogicTerm::node(rel.prop.functor(), {rel.prop.args()[1], rel.prop.args()[0]});
      CHECK(query(scene, flipped) == Verdict::True);
    }
  }
}

TEST_CASE("enumerate_facts ordering and self-consistency") {
  GeoScene scene = testutil::altitude_scene();
  std::vector<Fact> facts = enumerate_facts(scene);
  REQUIRE(!facts.empty());
  CHECK(facts.front().cls == Fact::Class::Shape);
  CHECK(print_logic_form(facts.front().prop) == "Triangle(A, B, C)");

  // Class buckets appear in order.
  std::vector<int> order;
  for (const auto& f : facts) order.push_back(static_cast<int>(f.cls));
  CHECK(std::is_sorted(order.begin(), order.end()));

  for (const auto& f : facts) {
    if (f.cls == Fact::Class::Measurement || f.cls == Fact::Class::Unrecognized) continue;
    CHECK(query(scene, f.prop) == Verdict::True);
  }
}

TEST_CASE("single measurement scene enumerates one measurement fact") {
  GeoScene scene = build_scene({parse_logic_form("Equals(LengthOf(Line(A, B)), 7)")});
  auto facts = enumerate_facts(scene);
  int count = 0;
  for (const auto& f : facts)
    if (f.cls == Fact::Class::Measurement) ++count;
  CHECK(count == 1);
}

TEST_CASE("self-consistency over random scenes") {
  Rng rng(4242);
  for (int i = 0; i < 60; ++i) {
    GeoScene scene = testutil::random_scene(rng);
    for (const auto& f : enumerate_facts(scene)) {
      if (f.cls == Fact::Class::Measurement || f.cls == Fact::Class::Unrecognized) continue;
      REQUIRE(query(scene, f.prop) == Verdict::True);
    }
  }
}

TEST_CASE("unknown forms land in the side list") {
  std::vector<LogicTerm> forms = {
      parse_logic_form("Triangle(A, B, C)"),
      parse_logic_form("Frobnicate(A, B)"),
      parse_logic_form("Equals(MeasureOf(Angle(A, B, C)), 5x+3)"),
  };
  GeoScene scene = build_scene(forms);
  CHECK(scene.shapes().size() == 1);
  CHECK(scene.unrecognized().size() == 2);
}

TEST_CASE("angle measurements normalize the vertex naming") {
  GeoScene scene = build_scene({parse_logic_form("Equals(MeasureOf(Angle(C, B, A)), 30)")});
  REQUIRE(scene.measurements().size() == 1);
  const auto& m = *scene.measurements().begin();
  CHECK(m.first == "MeasureOf(Angle(A, B, C))");
  CHECK(m.second.quantity.kind == QuantityKind::Angle);
  CHECK(m.second.quantity.value == Rational(30));
}

TEST_CASE("quantity range invariants") {
  CHECK_THROWS_AS(Quantity::make(Rational(0), QuantityKind::Length), DataError);
  CHECK_THROWS_AS(Quantity::make(Rational(-2), QuantityKind::Area), DataError);
  CHECK_THROWS_AS(Quantity::make(Rational(360), QuantityKind::Angle), DataError);
  CHECK_THROWS_AS(Quantity::make(Rational(0), QuantityKind::Angle), DataError);
  CHECK(Quantity::make(Rational(359), QuantityKind::Angle).value == Rational(359));
  // Out-of-range annotation values are side-listed, not fatal.
  GeoScene scene = build_scene({parse_logic_form("Equals(MeasureOf(Angle(A, B, C)), 400)")});
  CHECK(scene.measurements().empty());
  CHECK(scene.unrecognized().size() == 1);
}

TEST_CASE("scene JSON is stable") {
  GeoScene scene = testutil::altitude_scene();
  std::string a = scene.to_json().dump();
  std::string b = testutil::altitude_scene().to_json().dump();
  CHECK(a == b);
  CHECK(a.find("\"points\"") != std::string::npos);
  CHECK(a.find("Triangle") != std::string::npos);
}

TEST_CASE("equal-measure annotations become congruences") {
  GeoScene scene = build_scene({
      parse_logic_form("Equals(LengthOf(Line(A, B)), LengthOf(Line(C, D)))"),
  });
  REQUIRE(scene.relations().size() == 1);
  CHECK(scene.relations()[0].kind == RelationKind::Congruent);
  CHECK(ask(scene, "Congruent(Line(C, D), Line(A, B))") == Verdict::True);
}
