#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "geoforge/rational.hpp"
#include "geoforge/scene.hpp"

namespace geoforge {

class UnsolvableError : public DataError {
public:
  using DataError::DataError;
};

class DegenerateError : public UnsolvableError {
public:
  DegenerateError() : UnsolvableError("degenerate equation: 0*x = 0") {}
};

class InconsistentEquationError : public UnsolvableError {
public:
  InconsistentEquationError() : UnsolvableError("inconsistent equation: 0*x = c, c != 0") {}
};

class UnscalableKindError : public DataError {
public:
  using DataError::DataError;
};

// A value slot in a step: exact literal or reference to a trace variable.
struct ExprRef {
  enum class Kind { Literal, Variable };
  Kind kind = Kind::Literal;
  Rational literal;
  std::string var;

  static ExprRef lit(Rational v) { return ExprRef{Kind::Literal, std::move(v), {}}; }
  static ExprRef variable(std::string name) {
    return ExprRef{Kind::Variable, Rational(0), std::move(name)};
  }
  bool is_var() const { return kind == Kind::Variable; }
};

// Arithmetic expression over literals and bound variables.
class ArithExpr {
public:
  enum class Op { Value, Add, Sub, Mul, Div, Neg };

  static ArithExpr value(ExprRef ref);
  static ArithExpr binary(Op op, ArithExpr lhs, ArithExpr rhs);
  static ArithExpr neg(ArithExpr inner);

  Op op() const { return op_; }
  const ExprRef& ref() const { return ref_; }
  const std::vector<ArithExpr>& children() const { return children_; }

private:
  Op op_ = Op::Value;
  ExprRef ref_;
  std::vector<ArithExpr> children_;
};

// Steps. A Proportion asserts num1/den1 = num2/den2 and solves for its single
// unbound slot. A LinearEq solves a1*x + b1 = a2*x + b2 for the named unknown.
// An Arith step binds target to the value of an expression.
struct ProportionStep {
  ExprRef num1, den1, num2, den2;
};

struct LinearTerm {
  ExprRef coeff;
  bool times_unknown = false;
};

struct LinearEqStep {
  std::string unknown;
  std::vector<LinearTerm> lhs;
  std::vector<LinearTerm> rhs;
};

struct ArithStep {
  std::string target;
  ArithExpr expr;
};

using Step = std::variant<ProportionStep, LinearEqStep, ArithStep>;

// One condition variable of a trace. literal_text records the surface string
// the value carries in the source problem text (empty when unknown).
struct Binding {
  std::string name;
  Quantity quantity;
  std::string literal_text;
};

// Machine-checkable solution: condition bindings, equation steps, and the
// name of the variable holding the answer.
struct SolutionTrace {
  std::vector<Binding> bindings;
  std::vector<Step> steps;
  std::string result;
  QuantityKind result_kind = QuantityKind::Unknown;

  Json to_json() const;
  static SolutionTrace from_json(const Json& j);
};

// Evaluates every step over exact rationals and returns the result variable's
// quantity. Throws DivisionByZeroError, UnsolvableError, or DataError when a
// referenced variable is unbound.
Quantity replay(const SolutionTrace& trace);

// One linear form a*x + b with exact coefficients.
struct LinearForm {
  Rational unknown_coeff;
  Rational constant;
};

// Unique root of lhs = rhs. Throws DegenerateError / InconsistentEquationError
// when the unknown cancels.
Rational solve_linear(const LinearForm& lhs, const LinearForm& rhs);

// Length bindings scale by k, Area by k^2; Angle, Count, and Ratio stay
// fixed. Steps are untouched. k must be positive; Unknown-kind bindings make
// the trace unscalable.
SolutionTrace scale_trace(const SolutionTrace& trace, const Rational& k);

// Treats hidden_var as the unknown u, replays the trace symbolically, equates
// the result with known_result, and returns the value of u. Throws
// UnsolvableError when the dependence on u is not invertible in the trace DSL.
Rational replay_with_unknown(const SolutionTrace& trace, const std::string& hidden_var,
                             const Rational& known_result);

// Renames bindings and every reference to them, including step unknowns and
// the result variable.
SolutionTrace rename_variables(const SolutionTrace& trace,
                               const std::map<std::string, std::string>& renames);

// Reconstructs a proportion trace from a problem's text by matching the
// rationale's "a/b = c/d" equation against the question's numeric literals.
// Returns a trace only when its replay reproduces the answer's final value.
std::optional<SolutionTrace> reconstruct_trace(const std::string& question,
                                               const std::string& answer);

// Accepts decimal literals and exact "p/q" forms.
std::optional<Rational> parse_rational_text(const std::string& text);

}  // namespace geoforge
