#include <doctest.h>

#include "geoforge/rational.hpp"
#include "geoforge/rng.hpp"
#include "geoforge/trace.hpp"

using namespace geoforge;

namespace {

// The railing proportion: short arm a, long arm b, drop d, rise y with
// d / y = a / b.
SolutionTrace railing_trace() {
  SolutionTrace t;
  t.bindings = {
      {"a", Quantity{Rational(1), QuantityKind::Length, ""}, "1.0"},
      {"b", Quantity{Rational(16), QuantityKind::Length, ""}, "16.0"},
      {"d", Quantity{Rational(1, 2), QuantityKind::Length, ""}, "0.5"},
  };
  t.steps.push_back(ProportionStep{ExprRef::variable("d"), ExprRef::variable("y"),
                                   ExprRef::variable("a"), ExprRef::variable("b")});
  t.result = "y";
  t.result_kind = QuantityKind::Length;
  return t;
}

}  // namespace

TEST_CASE("decimal parsing and shortest-decimal formatting") {
  CHECK(*parse_decimal("0.5") == Rational(1, 2));
  CHECK(*parse_decimal("16.0") == Rational(16));
  CHECK(*parse_decimal("-3.25") == Rational(-13, 4));
  CHECK_FALSE(parse_decimal("5x+3").has_value());
  CHECK_FALSE(parse_decimal("5.").has_value());
  CHECK_FALSE(parse_decimal("").has_value());

  CHECK(format_rational(Rational(1, 2)) == "0.5");
  CHECK(format_rational(Rational(8)) == "8");
  CHECK(format_rational(Rational(-13, 4)) == "-3.25");
  CHECK(format_rational(Rational(1, 3)) == "1/3");
  CHECK(format_rational(Rational(0)) == "0");
  CHECK(format_rational(Rational(1, 8)) == "0.125");

  CHECK(*parse_rational_text("1/3") == Rational(1, 3));
  CHECK(*parse_rational_text("0.5") == Rational(1, 2));
}

TEST_CASE("railing proportion replays to 8") {
  Quantity result = replay(railing_trace());
  CHECK(result.value == Rational(8));
  CHECK(result.kind == QuantityKind::Length);
}

TEST_CASE("arith identity step") {
  SolutionTrace t;
  t.bindings = {{"x", Quantity{Rational(3), QuantityKind::Count, ""}, ""}};
  t.steps.push_back(ArithStep{"r", ArithExpr::value(ExprRef::variable("x"))});
  t.result = "r";
  t.result_kind = QuantityKind::Count;
  CHECK(replay(t).value == Rational(3));
}

TEST_CASE("proportion with literal slots solves the single unknown") {
  // 0.5 / 8 = u / 16
  SolutionTrace t;
  t.steps.push_back(ProportionStep{ExprRef::lit(Rational(1, 2)), ExprRef::lit(Rational(8)),
                                   ExprRef::variable("u"), ExprRef::lit(Rational(16))});
  t.result = "u";
  CHECK(replay(t).value == Rational(1));
}

TEST_CASE("solve_linear") {
  // 2u + 1 = 5
  CHECK(solve_linear(LinearForm{Rational(2), Rational(1)}, LinearForm{Rational(0), Rational(5)}) ==
        Rational(2));
  // 16 * 0.5 = 8u
  CHECK(solve_linear(LinearForm{Rational(0), Rational(8)}, LinearForm{Rational(8), Rational(0)}) ==
        Rational(1));
  CHECK_THROWS_AS(
      solve_linear(LinearForm{Rational(0), Rational(0)}, LinearForm{Rational(0), Rational(3)}),
      InconsistentEquationError);
  CHECK_THROWS_AS(
      solve_linear(LinearForm{Rational(1), Rational(2)}, LinearForm{Rational(1), Rational(2)}),
      DegenerateError);
}

TEST_CASE("linear equation step inside a trace") {
  SolutionTrace t;
  LinearEqStep step;
  step.unknown = "u";
  step.lhs = {{ExprRef::lit(Rational(2)), true}, {ExprRef::lit(Rational(1)), false}};
  step.rhs = {{ExprRef::lit(Rational(5)), false}};
  t.steps.push_back(step);
  t.result = "u";
  CHECK(replay(t).value == Rational(2));
}

TEST_CASE("replay error paths") {
  // Division by zero.
  SolutionTrace zero;
  zero.bindings = {{"a", Quantity{Rational(4), QuantityKind::Count, ""}, ""}};
  zero.steps.push_back(ArithStep{
      "r", ArithExpr::binary(ArithExpr::Op::Div, ArithExpr::value(ExprRef::variable("a")),
                             ArithExpr::value(ExprRef::lit(Rational(0))))});
  zero.result = "r";
  CHECK_THROWS_AS(replay(zero), DivisionByZeroError);

  // Two unknowns in one proportion.
  SolutionTrace two;
  two.steps.push_back(ProportionStep{ExprRef::variable("x"), ExprRef::variable("y"),
                                     ExprRef::lit(Rational(1)), ExprRef::lit(Rational(2))});
  two.result = "x";
  CHECK_THROWS_AS(replay(two), UnsolvableError);

  // No unknown at all.
  SolutionTrace none;
  none.steps.push_back(ProportionStep{ExprRef::lit(Rational(1)), ExprRef::lit(Rational(2)),
                                      ExprRef::lit(Rational(2)), ExprRef::lit(Rational(4))});
  none.result = "x";
  CHECK_THROWS_AS(replay(none), UnsolvableError);

  // Unbound variable reference.
  SolutionTrace unbound;
  unbound.steps.push_back(ArithStep{"r", ArithExpr::value(ExprRef::variable("ghost"))});
  unbound.result = "r";
  CHECK_THROWS_AS(replay(unbound), DataError);
}

TEST_CASE("scale_trace scales lengths and leaves angles fixed") {
  SolutionTrace t = railing_trace();
  SolutionTrace doubled = scale_trace(t, Rational(2));
  CHECK(doubled.bindings[0].quantity.value == Rational(2));
  CHECK(doubled.bindings[1].quantity.value == Rational(32));
  CHECK(doubled.bindings[2].quantity.value == Rational(1));
  CHECK(replay(doubled).value == Rational(16));

  SolutionTrace same = scale_trace(t, Rational(1));
  CHECK(replay(same).value == replay(t).value);

  SolutionTrace angles;
  angles.bindings = {{"t", Quantity{Rational(30), QuantityKind::Angle, ""}, "30"}};
  angles.steps.push_back(ArithStep{"r", ArithExpr::value(ExprRef::variable("t"))});
  angles.result = "r";
  angles.result_kind = QuantityKind::Angle;
  SolutionTrace scaled = scale_trace(angles, Rational(2));
  CHECK(scaled.bindings[0].quantity.value == Rational(30));
  CHECK(replay(scaled).value == Rational(30));

  SolutionTrace bad;
  bad.bindings = {{"q", Quantity{Rational(5), QuantityKind::Unknown, ""}, ""}};
  bad.steps.push_back(ArithStep{"r", ArithExpr::value(ExprRef::variable("q"))});
  bad.result = "r";
  CHECK_THROWS_AS(scale_trace(bad, Rational(2)), UnscalableKindError);

  CHECK_THROWS_AS(scale_trace(t, Rational(0)), DataError);
}

TEST_CASE("area bindings scale by k squared") {
  SolutionTrace t;
  t.bindings = {{"s", Quantity{Rational(6), QuantityKind::Area, ""}, "6"}};
  t.steps.push_back(ArithStep{"r", ArithExpr::value(ExprRef::variable("s"))});
  t.result = "r";
  t.result_kind = QuantityKind::Area;
  CHECK(replay(scale_trace(t, Rational(3))).value == Rational(54));
}

TEST_CASE("scaling homogeneity property over random proportion traces") {
  Rng rng(1234);
  const std::vector<Rational> factors = {Rational(1, 2), Rational(2), Rational(3), Rational(10)};
  for (int i = 0; i < 100; ++i) {
    SolutionTrace t;
    Rational a(1 + static_cast<long>(rng.below(40)), 1 + static_cast<long>(rng.below(8)));
    Rational b(1 + static_cast<long>(rng.below(40)), 1 + static_cast<long>(rng.below(8)));
    Rational d(1 + static_cast<long>(rng.below(40)), 1 + static_cast<long>(rng.below(8)));
    t.bindings = {
        {"a", Quantity{a, QuantityKind::Length, ""}, ""},
        {"b", Quantity{b, QuantityKind::Length, ""}, ""},
        {"d", Quantity{d, QuantityKind::Length, ""}, ""},
        {"theta", Quantity{Rational(45), QuantityKind::Angle, ""}, ""},
    };
    t.steps.push_back(ProportionStep{ExprRef::variable("d"), ExprRef::variable("y"),
                                     ExprRef::variable("a"), ExprRef::variable("b")});
    t.result = "y";
    t.result_kind = QuantityKind::Length;

    Rational base = replay(t).value;
    for (const auto& k : factors) {
      SolutionTrace scaled = scale_trace(t, k);
      CHECK(replay(scaled).value == k * base);
      CHECK(scaled.bindings[3].quantity.value == Rational(45));
    }
  }
}

TEST_CASE("solve_linear root satisfies the equation exactly") {
  Rng rng(55);
  for (int i = 0; i < 200; ++i) {
    LinearForm lhs{Rational(static_cast<long>(rng.range(-20, 20))),
                   Rational(static_cast<long>(rng.range(-50, 50)))};
    LinearForm rhs{Rational(static_cast<long>(rng.range(-20, 20))),
                   Rational(static_cast<long>(rng.range(-50, 50)))};
    if (lhs.unknown_coeff == rhs.unknown_coeff) continue;
    Rational root = solve_linear(lhs, rhs);
    CHECK(lhs.unknown_coeff * root + lhs.constant == rhs.unknown_coeff * root + rhs.constant);
  }
}

TEST_CASE("replay_with_unknown recovers hidden conditions") {
  SolutionTrace t = railing_trace();
  // Hide the short arm, give the rise.
  CHECK(replay_with_unknown(t, "a", Rational(8)) == Rational(1));
  // Hide the long arm instead.
  CHECK(replay_with_unknown(t, "b", Rational(8)) == Rational(16));
  // Hide the drop.
  CHECK(replay_with_unknown(t, "d", Rational(8)) == Rational(1, 2));

  CHECK_THROWS_AS(replay_with_unknown(t, "nope", Rational(8)), DataError);
}

TEST_CASE("replay_with_unknown rejects non-invertible dependence") {
  // result = a / a is constant in the hidden variable.
  SolutionTrace t;
  t.bindings = {{"a", Quantity{Rational(4), QuantityKind::Length, ""}, ""}};
  t.steps.push_back(ArithStep{
      "r", ArithExpr::binary(ArithExpr::Op::Div, ArithExpr::value(ExprRef::variable("a")),
                             ArithExpr::value(ExprRef::variable("a")))});
  t.result = "r";
  CHECK_THROWS_AS(replay_with_unknown(t, "a", Rational(1)), UnsolvableError);

  // result = a * a is quadratic in the hidden variable.
  SolutionTrace sq;
  sq.bindings = {{"a", Quantity{Rational(4), QuantityKind::Length, ""}, ""}};
  sq.steps.push_back(ArithStep{
      "r", ArithExpr::binary(ArithExpr::Op::Mul, ArithExpr::value(ExprRef::variable("a")),
                             ArithExpr::value(ExprRef::variable("a")))});
  sq.result = "r";
  CHECK_THROWS_AS(replay_with_unknown(sq, "a", Rational(16)), UnsolvableError);
}

TEST_CASE("trace JSON round-trip") {
  SolutionTrace t = railing_trace();
  Json j = t.to_json();
  SolutionTrace back = SolutionTrace::from_json(j);
  CHECK(back.to_json() == j);
  CHECK(replay(back).value == Rational(8));
  CHECK(back.bindings[2].literal_text == "0.5");
}

TEST_CASE("rename_variables renames refs consistently") {
  SolutionTrace t = railing_trace();
  SolutionTrace renamed = rename_variables(t, {{"a", "s"}, {"b", "l"}, {"y", "deltaL"}});
  CHECK(renamed.bindings[0].name == "s");
  CHECK(renamed.result == "deltaL");
  CHECK(replay(renamed).value == Rational(8));
}

TEST_CASE("reconstruct_trace from the railing rationale") {
  std::string question =
      "As shown in the figure, the length of the short arm of the railing at the railway "
      "crossing is 1.0 and the length of the long arm is 16.0. When the end of the short arm "
      "drops by 0.5, the end of the long arm rises ()";
  std::string answer =
      "The triangles formed by the arms are similar. The rise of the long arm h can be "
      "calculated using the equation 0.5/h = 1/16. Solving for h gives h = 16 * 0.5 / 1, "
      "which equals 8.0 units.";
  auto trace = reconstruct_trace(question, answer);
  REQUIRE(trace.has_value());
  CHECK(replay(*trace).value == Rational(8));
  CHECK(trace->result == "h");

  // Product-style rationale, no slash equation.
  std::string mult_answer =
      "Since the long arm is 16 times longer, the rise is 0.5 multiplied by 16, resulting "
      "in a rise of 8 meters.";
  auto trace2 = reconstruct_trace(question, mult_answer);
  REQUIRE(trace2.has_value());
  CHECK(replay(*trace2).value == Rational(8));

  CHECK_FALSE(reconstruct_trace("no numbers here", "none there either").has_value());
}

TEST_CASE("replay determinism") {
  SolutionTrace t = railing_trace();
  std::string a = t.to_json().dump();
  Quantity q1 = replay(t);
  Quantity q2 = replay(t);
  CHECK(q1.value == q2.value);
  CHECK(t.to_json().dump() == a);
}
