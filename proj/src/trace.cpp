#include "geoforge/trace.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <map>
#include <regex>
#include <set>

namespace geoforge {

namespace {

constexpr std::size_t kMaxSteps = 10000;

// Degree-1 polynomial a*u + b in the single symbolic unknown.
struct LinPoly {
  Rational a{0};
  Rational b{0};
};

LinPoly p_add(const LinPoly& p, const LinPoly& q) { return {p.a + q.a, p.b + q.b}; }
LinPoly p_sub(const LinPoly& p, const LinPoly& q) { return {p.a - q.a, p.b - q.b}; }

LinPoly p_mul(const LinPoly& p, const LinPoly& q) {
  if (p.a != 0 && q.a != 0)
    throw UnsolvableError("non-linear dependence on the unknown");
  return {p.a * q.b + p.b * q.a, p.b * q.b};
}

bool p_zero(const LinPoly& p) { return p.a == 0 && p.b == 0; }

// Rational function (a*u + b) / (c*u + d), closed under the trace DSL's
// operations as long as the dependence on u stays degree one.
struct LinFrac {
  LinPoly num{Rational(0), Rational(0)};
  LinPoly den{Rational(0), Rational(1)};

  static LinFrac constant(Rational v) { return {{Rational(0), std::move(v)}, {Rational(0), Rational(1)}}; }
  static LinFrac unknown() { return {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}; }

  bool is_const() const { return num.a == 0 && den.a == 0; }
  bool depends_on_u() const { return num.a != 0 || den.a != 0; }

  Rational const_value() const {
    if (den.b == 0) throw DivisionByZeroError();
    return num.b / den.b;
  }
};

LinFrac f_add(const LinFrac& x, const LinFrac& y) {
  return {p_add(p_mul(x.num, y.den), p_mul(y.num, x.den)), p_mul(x.den, y.den)};
}
LinFrac f_sub(const LinFrac& x, const LinFrac& y) {
  return {p_sub(p_mul(x.num, y.den), p_mul(y.num, x.den)), p_mul(x.den, y.den)};
}
LinFrac f_mul(const LinFrac& x, const LinFrac& y) {
  return {p_mul(x.num, y.num), p_mul(x.den, y.den)};
}
LinFrac f_div(const LinFrac& x, const LinFrac& y) {
  if (p_zero(y.num)) throw DivisionByZeroError();
  return {p_mul(x.num, y.den), p_mul(x.den, y.num)};
}
LinFrac f_neg(const LinFrac& x) {
  return {{-x.num.a, -x.num.b}, x.den};
}

struct Env {
  std::map<std::string, LinFrac> values;

  bool has(const std::string& name) const { return values.count(name) != 0; }
  const LinFrac& get(const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) throw DataError("unbound variable: " + name);
    return it->second;
  }
  void bind(const std::string& name, LinFrac value) { values[name] = std::move(value); }
};

LinFrac eval_ref(const ExprRef& ref, const Env& env) {
  if (ref.is_var()) return env.get(ref.var);
  return LinFrac::constant(ref.literal);
}

LinFrac eval_expr(const ArithExpr& e, const Env& env) {
  switch (e.op()) {
    case ArithExpr::Op::Value: return eval_ref(e.ref(), env);
    case ArithExpr::Op::Neg: return f_neg(eval_expr(e.children()[0], env));
    case ArithExpr::Op::Add:
      return f_add(eval_expr(e.children()[0], env), eval_expr(e.children()[1], env));
    case ArithExpr::Op::Sub:
      return f_sub(eval_expr(e.children()[0], env), eval_expr(e.children()[1], env));
    case ArithExpr::Op::Mul:
      return f_mul(eval_expr(e.children()[0], env), eval_expr(e.children()[1], env));
    case ArithExpr::Op::Div: {
      LinFrac d = eval_expr(e.children()[1], env);
      if (d.is_const() && d.const_value() == 0) throw DivisionByZeroError();
      return f_div(eval_expr(e.children()[0], env), d);
    }
  }
  throw DataError("bad expression node");
}

struct RunResult {
  LinFrac result;
  std::optional<Rational> pinned_u;  // set when an assertion step fixed the unknown
};

void validate(const SolutionTrace& trace) {
  if (trace.result.empty()) throw DataError("trace has no result variable");
  if (trace.steps.size() > kMaxSteps) throw DataError("trace exceeds step bound");
  std::set<std::string> names;
  for (const auto& b : trace.bindings)
    if (!names.insert(b.name).second) throw DataError("duplicate binding: " + b.name);
}

// Shared engine for numeric replay (hidden empty) and symbolic replay. All
// values are rational functions of the hidden unknown; with no hidden
// variable every value stays constant.
RunResult run_trace(const SolutionTrace& trace, const std::string& hidden) {
  validate(trace);
  Env env;
  for (const auto& b : trace.bindings) {
    if (b.name == hidden)
      env.bind(b.name, LinFrac::unknown());
    else
      env.bind(b.name, LinFrac::constant(b.quantity.value));
  }

  for (const auto& step : trace.steps) {
    if (const auto* prop = std::get_if<ProportionStep>(&step)) {
      const ExprRef* slots[4] = {&prop->num1, &prop->den1, &prop->num2, &prop->den2};
      int unknown_slot = -1;
      int unknown_count = 0;
      for (int i = 0; i < 4; ++i) {
        if (slots[i]->is_var() && !env.has(slots[i]->var)) {
          unknown_slot = i;
          ++unknown_count;
        }
      }
      if (unknown_count > 1) throw UnsolvableError("proportion step has more than one unknown");
      if (unknown_count == 0) {
        // Assertion. With a symbolic unknown in play it pins u; otherwise the
        // step solves nothing and the trace is malformed.
        LinFrac lhs = f_mul(eval_ref(prop->num1, env), eval_ref(prop->den2, env));
        LinFrac rhs = f_mul(eval_ref(prop->den1, env), eval_ref(prop->num2, env));
        LinFrac diff = f_sub(lhs, rhs);
        if (diff.num.a == 0) throw UnsolvableError("proportion step has no unknown");
        return RunResult{LinFrac::constant(0), Rational(-diff.num.b / diff.num.a)};
      }
      LinFrac n1 = unknown_slot == 0 ? LinFrac::constant(0) : eval_ref(prop->num1, env);
      LinFrac d1 = unknown_slot == 1 ? LinFrac::constant(0) : eval_ref(prop->den1, env);
      LinFrac n2 = unknown_slot == 2 ? LinFrac::constant(0) : eval_ref(prop->num2, env);
      LinFrac d2 = unknown_slot == 3 ? LinFrac::constant(0) : eval_ref(prop->den2, env);
      LinFrac solved;
      switch (unknown_slot) {
        case 0: solved = f_div(f_mul(d1, n2), d2); break;
        case 1: solved = f_div(f_mul(n1, d2), n2); break;
        case 2: solved = f_div(f_mul(n1, d2), d1); break;
        default: solved = f_div(f_mul(d1, n2), n1); break;
      }
      env.bind(slots[unknown_slot]->var, solved);
    } else if (const auto* lin = std::get_if<LinearEqStep>(&step)) {
      if (env.has(lin->unknown)) throw DataError("linear step unknown already bound: " + lin->unknown);
      auto side = [&](const std::vector<LinearTerm>& terms) {
        LinFrac coeff_x = LinFrac::constant(0);
        LinFrac constant = LinFrac::constant(0);
        for (const auto& t : terms) {
          LinFrac c = eval_ref(t.coeff, env);
          if (t.times_unknown)
            coeff_x = f_add(coeff_x, c);
          else
            constant = f_add(constant, c);
        }
        return std::pair{coeff_x, constant};
      };
      auto [p, q] = side(lin->lhs);
      auto [r, s] = side(lin->rhs);
      // p*x + q = r*x + s  =>  x = (s - q) / (p - r)
      LinFrac denom = f_sub(p, r);
      LinFrac numer = f_sub(s, q);
      if (denom.is_const() && denom.const_value() == 0) {
        if (numer.is_const() && numer.const_value() == 0) throw DegenerateError();
        if (numer.is_const()) throw InconsistentEquationError();
      }
      env.bind(lin->unknown, f_div(numer, denom));
    } else {
      const auto& arith = std::get<ArithStep>(step);
      env.bind(arith.target, eval_expr(arith.expr, env));
    }
  }

  if (!env.has(trace.result)) throw UnsolvableError("trace never binds its result: " + trace.result);
  return RunResult{env.get(trace.result), std::nullopt};
}

}  // namespace

ArithExpr ArithExpr::value(ExprRef ref) {
  ArithExpr e;
  e.op_ = Op::Value;
  e.ref_ = std::move(ref);
  return e;
}

ArithExpr ArithExpr::binary(Op op, ArithExpr lhs, ArithExpr rhs) {
  ArithExpr e;
  e.op_ = op;
  e.children_.push_back(std::move(lhs));
  e.children_.push_back(std::move(rhs));
  return e;
}

ArithExpr ArithExpr::neg(ArithExpr inner) {
  ArithExpr e;
  e.op_ = Op::Neg;
  e.children_.push_back(std::move(inner));
  return e;
}

Quantity replay(const SolutionTrace& trace) {
  RunResult run = run_trace(trace, "");
  if (!run.result.is_const()) throw DataError("replay produced a symbolic value");
  Rational value = run.result.const_value();
  return Quantity{std::move(value), trace.result_kind, ""};
}

Rational solve_linear(const LinearForm& lhs, const LinearForm& rhs) {
  Rational a = lhs.unknown_coeff - rhs.unknown_coeff;
  Rational b = rhs.constant - lhs.constant;
  if (a == 0) {
    if (b == 0) throw DegenerateError();
    throw InconsistentEquationError();
  }
  return b / a;
}

SolutionTrace scale_trace(const SolutionTrace& trace, const Rational& k) {
  if (k <= 0) throw DataError("scale factor must be positive");
  SolutionTrace scaled = trace;
  for (auto& b : scaled.bindings) {
    switch (b.quantity.kind) {
      case QuantityKind::Length:
        b.quantity.value *= k;
        b.literal_text.clear();
        break;
      case QuantityKind::Area:
        b.quantity.value *= k * k;
        b.literal_text.clear();
        break;
      case QuantityKind::Angle:
      case QuantityKind::Count:
      case QuantityKind::Ratio:
        break;
      case QuantityKind::Unknown:
        throw UnscalableKindError("binding " + b.name + " has unknown kind");
    }
  }
  return scaled;
}

Rational replay_with_unknown(const SolutionTrace& trace, const std::string& hidden_var,
                             const Rational& known_result) {
  bool found = false;
  for (const auto& b : trace.bindings)
    if (b.name == hidden_var) found = true;
  if (!found) throw DataError("hidden variable is not a condition binding: " + hidden_var);

  RunResult run = run_trace(trace, hidden_var);
  if (run.pinned_u) {
    // An assertion step already fixed the unknown; the given answer must
    // still be consistent with the full trace.
    SolutionTrace check = trace;
    for (auto& b : check.bindings)
      if (b.name == hidden_var) b.quantity.value = *run.pinned_u;
    if (replay(check).value != known_result)
      throw UnsolvableError("given answer is inconsistent with the trace");
    return *run.pinned_u;
  }

  // result(u) = known_result  =>  num(u) = v * den(u)
  LinearForm lhs{run.result.num.a, run.result.num.b};
  LinearForm rhs{known_result * run.result.den.a, known_result * run.result.den.b};
  Rational u = solve_linear(lhs, rhs);
  if (run.result.den.a * u + run.result.den.b == 0) throw DivisionByZeroError();
  return u;
}

SolutionTrace rename_variables(const SolutionTrace& trace,
                               const std::map<std::string, std::string>& renames) {
  auto rename = [&](const std::string& name) {
    auto it = renames.find(name);
    return it == renames.end() ? name : it->second;
  };
  auto rename_ref = [&](ExprRef ref) {
    if (ref.is_var()) ref.var = rename(ref.var);
    return ref;
  };
  std::function<ArithExpr(const ArithExpr&)> rename_expr = [&](const ArithExpr& e) -> ArithExpr {
    if (e.op() == ArithExpr::Op::Value) return ArithExpr::value(rename_ref(e.ref()));
    if (e.op() == ArithExpr::Op::Neg) return ArithExpr::neg(rename_expr(e.children()[0]));
    return ArithExpr::binary(e.op(), rename_expr(e.children()[0]), rename_expr(e.children()[1]));
  };

  SolutionTrace out = trace;
  for (auto& b : out.bindings) b.name = rename(b.name);
  out.result = rename(out.result);
  for (auto& step : out.steps) {
    if (auto* prop = std::get_if<ProportionStep>(&step)) {
      prop->num1 = rename_ref(prop->num1);
      prop->den1 = rename_ref(prop->den1);
      prop->num2 = rename_ref(prop->num2);
      prop->den2 = rename_ref(prop->den2);
    } else if (auto* lin = std::get_if<LinearEqStep>(&step)) {
      lin->unknown = rename(lin->unknown);
      for (auto& t : lin->lhs) t.coeff = rename_ref(t.coeff);
      for (auto& t : lin->rhs) t.coeff = rename_ref(t.coeff);
    } else {
      auto& arith = std::get<ArithStep>(step);
      arith.target = rename(arith.target);
      arith.expr = rename_expr(arith.expr);
    }
  }
  return out;
}

std::optional<Rational> parse_rational_text(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    auto num = parse_decimal(text.substr(0, slash));
    auto den = parse_decimal(text.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    return *num / *den;
  }
  return parse_decimal(text);
}

// --- JSON -------------------------------------------------------------

namespace {

Json ref_to_json(const ExprRef& ref) {
  if (ref.is_var()) return Json{{"var", ref.var}};
  return Json{{"lit", format_rational(ref.literal)}};
}

ExprRef ref_from_json(const Json& j) {
  if (j.contains("var")) return ExprRef::variable(j.at("var").get<std::string>());
  auto v = parse_rational_text(j.at("lit").get<std::string>());
  if (!v) throw DataError("bad literal in trace: " + j.dump());
  return ExprRef::lit(*v);
}

Json expr_to_json(const ArithExpr& e) {
  switch (e.op()) {
    case ArithExpr::Op::Value: return ref_to_json(e.ref());
    case ArithExpr::Op::Neg: return Json{{"op", "neg"}, {"args", Json::array({expr_to_json(e.children()[0])})}};
    default: {
      const char* name = e.op() == ArithExpr::Op::Add   ? "add"
                         : e.op() == ArithExpr::Op::Sub ? "sub"
                         : e.op() == ArithExpr::Op::Mul ? "mul"
                                                        : "div";
      return Json{{"op", name},
                  {"args", Json::array({expr_to_json(e.children()[0]), expr_to_json(e.children()[1])})}};
    }
  }
}

ArithExpr expr_from_json(const Json& j) {
  if (!j.contains("op")) return ArithExpr::value(ref_from_json(j));
  std::string op = j.at("op").get<std::string>();
  const Json& args = j.at("args");
  if (op == "neg") return ArithExpr::neg(expr_from_json(args.at(0)));
  ArithExpr::Op code = op == "add"   ? ArithExpr::Op::Add
                       : op == "sub" ? ArithExpr::Op::Sub
                       : op == "mul" ? ArithExpr::Op::Mul
                       : op == "div" ? ArithExpr::Op::Div
                                     : ArithExpr::Op::Value;
  if (code == ArithExpr::Op::Value) throw DataError("unknown expression op: " + op);
  return ArithExpr::binary(code, expr_from_json(args.at(0)), expr_from_json(args.at(1)));
}

}  // namespace

Json SolutionTrace::to_json() const {
  Json j;
  Json bindings_json = Json::array();
  for (const auto& b : bindings) {
    Json bj{{"name", b.name},
            {"value", format_rational(b.quantity.value)},
            {"kind", to_string(b.quantity.kind)}};
    if (!b.quantity.unit.empty()) bj["unit"] = b.quantity.unit;
    if (!b.literal_text.empty()) bj["text"] = b.literal_text;
    bindings_json.push_back(std::move(bj));
  }
  j["bindings"] = std::move(bindings_json);

  Json steps_json = Json::array();
  for (const auto& step : steps) {
    if (const auto* prop = std::get_if<ProportionStep>(&step)) {
      steps_json.push_back(Json{{"op", "proportion"},
                                {"num1", ref_to_json(prop->num1)},
                                {"den1", ref_to_json(prop->den1)},
                                {"num2", ref_to_json(prop->num2)},
                                {"den2", ref_to_json(prop->den2)}});
    } else if (const auto* lin = std::get_if<LinearEqStep>(&step)) {
      auto terms = [](const std::vector<LinearTerm>& ts) {
        Json arr = Json::array();
        for (const auto& t : ts)
          arr.push_back(Json{{"coeff", ref_to_json(t.coeff)}, {"times_unknown", t.times_unknown}});
        return arr;
      };
      steps_json.push_back(Json{{"op", "linear_eq"},
                                {"unknown", lin->unknown},
                                {"lhs", terms(lin->lhs)},
                                {"rhs", terms(lin->rhs)}});
    } else {
      const auto& arith = std::get<ArithStep>(step);
      steps_json.push_back(
          Json{{"op", "arith"}, {"target", arith.target}, {"expr", expr_to_json(arith.expr)}});
    }
  }
  j["steps"] = std::move(steps_json);
  j["result"] = result;
  j["result_kind"] = to_string(result_kind);
  return j;
}

SolutionTrace SolutionTrace::from_json(const Json& j) {
  SolutionTrace trace;
  for (const auto& bj : j.at("bindings")) {
    Binding b;
    b.name = bj.at("name").get<std::string>();
    auto value = parse_rational_text(bj.at("value").get<std::string>());
    if (!value) throw DataError("bad binding value in trace JSON");
    auto kind = quantity_kind_from_string(bj.at("kind").get<std::string>());
    if (!kind) throw DataError("bad binding kind in trace JSON");
    b.quantity = Quantity{*value, *kind, bj.value("unit", std::string())};
    b.literal_text = bj.value("text", std::string());
    trace.bindings.push_back(std::move(b));
  }
  for (const auto& sj : j.at("steps")) {
    std::string op = sj.at("op").get<std::string>();
    if (op == "proportion") {
      trace.steps.push_back(ProportionStep{ref_from_json(sj.at("num1")), ref_from_json(sj.at("den1")),
                                           ref_from_json(sj.at("num2")), ref_from_json(sj.at("den2"))});
    } else if (op == "linear_eq") {
      LinearEqStep step;
      step.unknown = sj.at("unknown").get<std::string>();
      auto terms = [](const Json& arr) {
        std::vector<LinearTerm> ts;
        for (const auto& tj : arr)
          ts.push_back(LinearTerm{ref_from_json(tj.at("coeff")), tj.at("times_unknown").get<bool>()});
        return ts;
      };
      step.lhs = terms(sj.at("lhs"));
      step.rhs = terms(sj.at("rhs"));
      trace.steps.push_back(std::move(step));
    } else if (op == "arith") {
      trace.steps.push_back(
          ArithStep{sj.at("target").get<std::string>(), expr_from_json(sj.at("expr"))});
    } else {
      throw DataError("unknown step op in trace JSON: " + op);
    }
  }
  trace.result = j.at("result").get<std::string>();
  auto kind = quantity_kind_from_string(j.value("result_kind", "Unknown"));
  trace.result_kind = kind ? *kind : QuantityKind::Unknown;
  return trace;
}

// --- Reconstruction ----------------------------------------------------

namespace {

struct TextLiteral {
  Rational value;
  std::string surface;
  QuantityKind kind;
};

std::vector<TextLiteral> extract_literals(const std::string& text) {
  static const std::regex number(R"((\d+(?:\.\d+)?))");
  std::vector<TextLiteral> out;
  auto begin = std::sregex_iterator(text.begin(), text.end(), number);
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    std::string surface = it->str(1);
    auto value = parse_decimal(surface);
    if (!value) continue;
    std::size_t pos = static_cast<std::size_t>(it->position(0));
    std::size_t from = pos > 32 ? pos - 32 : 0;
    std::string context = text.substr(from, pos - from);
    std::transform(context.begin(), context.end(), context.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    QuantityKind kind =
        context.find("angle") != std::string::npos ? QuantityKind::Angle : QuantityKind::Length;
    out.push_back(TextLiteral{*value, surface, kind});
  }
  return out;
}

std::optional<Rational> final_value(const std::string& text) {
  auto literals = extract_literals(text);
  if (literals.empty()) return std::nullopt;
  return literals.back().value;
}

}  // namespace

std::optional<SolutionTrace> reconstruct_trace(const std::string& question,
                                               const std::string& answer) {
  auto expected = final_value(answer);
  if (!expected) return std::nullopt;
  auto question_literals = extract_literals(question);

  auto make_ref = [&](const std::string& token, SolutionTrace& trace,
                      int& counter) -> std::optional<ExprRef> {
    auto value = parse_decimal(token);
    if (!value) return std::nullopt;
    for (const auto& b : trace.bindings)
      if (b.quantity.value == *value) return ExprRef::variable(b.name);
    Binding binding;
    binding.name = "v" + std::to_string(++counter);
    QuantityKind kind = QuantityKind::Length;
    std::string surface = token;
    for (const auto& lit : question_literals) {
      if (lit.value == *value) {
        kind = lit.kind;
        surface = lit.surface;
        break;
      }
    }
    try {
      binding.quantity = Quantity::make(*value, kind);
    } catch (const DataError&) {
      return std::nullopt;
    }
    binding.literal_text = surface;
    trace.bindings.push_back(binding);
    return ExprRef::variable(binding.name);
  };

  // Rationales state proportions as "a/b = c/d" with the answer variable as
  // the single non-numeric slot.
  static const std::regex proportion(
      R"(([A-Za-z0-9_]+(?:\.[0-9]+)?)\s*/\s*([A-Za-z0-9_]+(?:\.[0-9]+)?)\s*=\s*([A-Za-z0-9_]+(?:\.[0-9]+)?)\s*/\s*([A-Za-z0-9_]+(?:\.[0-9]+)?))");
  for (auto it = std::sregex_iterator(answer.begin(), answer.end(), proportion);
       it != std::sregex_iterator(); ++it) {
    std::array<std::string, 4> tokens = {it->str(1), it->str(2), it->str(3), it->str(4)};
    int unknown_slot = -1;
    int unknown_count = 0;
    for (int i = 0; i < 4; ++i) {
      if (!parse_decimal(tokens[i])) {
        unknown_slot = i;
        ++unknown_count;
      }
    }
    if (unknown_count != 1) continue;

    SolutionTrace trace;
    int counter = 0;
    std::array<ExprRef, 4> refs;
    bool ok = true;
    for (int i = 0; i < 4; ++i) {
      if (i == unknown_slot) {
        refs[i] = ExprRef::variable(tokens[i]);
        continue;
      }
      auto ref = make_ref(tokens[i], trace, counter);
      if (!ref) {
        ok = false;
        break;
      }
      refs[i] = *ref;
    }
    if (!ok) continue;
    trace.steps.push_back(ProportionStep{refs[0], refs[1], refs[2], refs[3]});
    trace.result = tokens[unknown_slot];
    trace.result_kind = QuantityKind::Length;
    try {
      if (replay(trace).value == *expected) return trace;
    } catch (const Error&) {
      continue;
    }
  }

  // "x multiplied by y" rationales become a single product step.
  static const std::regex product(
      R"((\d+(?:\.\d+)?)\s*(?:multiplied by|\*|times)\s*(\d+(?:\.\d+)?))");
  for (auto it = std::sregex_iterator(answer.begin(), answer.end(), product);
       it != std::sregex_iterator(); ++it) {
    SolutionTrace trace;
    int counter = 0;
    auto lhs = make_ref(it->str(1), trace, counter);
    auto rhs = make_ref(it->str(2), trace, counter);
    if (!lhs || !rhs) continue;
    trace.steps.push_back(ArithStep{
        "r", ArithExpr::binary(ArithExpr::Op::Mul, ArithExpr::value(*lhs), ArithExpr::value(*rhs))});
    trace.result = "r";
    trace.result_kind = QuantityKind::Length;
    try {
      if (replay(trace).value == *expected) return trace;
    } catch (const Error&) {
      continue;
    }
  }
  return std::nullopt;
}

}  // namespace geoforge
