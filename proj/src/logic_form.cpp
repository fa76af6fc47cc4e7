#include "geoforge/logic_form.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "geoforge/rational.hpp"

namespace geoforge {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool is_identifier(std::string_view text) {
  if (text.empty() || !is_ident_start(text[0])) return false;
  for (char c : text)
    if (!is_ident_char(c)) return false;
  return true;
}

// Recursive descent over one statement. Tokens end at '(' ')' ',' or
// whitespace; anything that is neither a numeral nor an identifier becomes an
// opaque Expression leaf (Geometry3K carries leaves like "5x+3").
class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  LogicTerm parse() {
    LogicTerm term = parse_term();
    skip_ws();
    if (pos_ != text_.size()) throw SyntaxError(pos_, "end of input");
    return term;
  }

private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  LogicTerm parse_term() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError(pos_, "term");
    char c = text_[pos_];
    if (c == '(' || c == ')' || c == ',') throw SyntaxError(pos_, "term");

    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char t = text_[pos_];
      if (t == '(' || t == ')' || t == ',' || std::isspace(static_cast<unsigned char>(t))) break;
      ++pos_;
    }
    std::string token(text_.substr(start, pos_ - start));

    std::size_t after_token = pos_;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      if (!is_identifier(token)) throw SyntaxError(start, "predicate name before '('");
      ++pos_;  // consume '('
      std::vector<LogicTerm> args;
      args.push_back(parse_term());
      for (;;) {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError(pos_, "')' or ','");
        if (text_[pos_] == ')') {
          ++pos_;
          return LogicTerm::node(std::move(token), std::move(args));
        }
        if (text_[pos_] == ',') {
          ++pos_;
          args.push_back(parse_term());
          continue;
        }
        throw SyntaxError(pos_, "')' or ','");
      }
    }
    pos_ = after_token;
    return LogicTerm::leaf(std::move(token));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

LogicTerm LogicTerm::leaf(std::string text) {
  LogicTerm t;
  if (is_numeric_literal(text)) {
    t.leaf_kind_ = LeafKind::Numeric;
  } else if (is_identifier(text)) {
    t.leaf_kind_ = LeafKind::Identifier;
  } else {
    t.leaf_kind_ = LeafKind::Expression;
  }
  t.text_ = std::move(text);
  return t;
}

LogicTerm LogicTerm::node(std::string functor, std::vector<LogicTerm> args) {
  if (functor.empty() || !is_identifier(functor))
    throw DataError("invalid functor name: " + functor);
  if (args.empty()) throw DataError("node requires at least one argument");
  LogicTerm t;
  t.functor_ = std::move(functor);
  t.args_ = std::move(args);
  return t;
}

bool LogicTerm::operator==(const LogicTerm& other) const {
  if (is_leaf() != other.is_leaf()) return false;
  if (is_leaf()) return text_ == other.text_;
  return functor_ == other.functor_ && args_ == other.args_;
}

LogicTerm parse_logic_form(std::string_view text) { return Parser(text).parse(); }

std::string print_logic_form(const LogicTerm& term) {
  if (term.is_leaf()) return term.text();
  std::string out = term.functor();
  out.push_back('(');
  bool first = true;
  for (const LogicTerm& arg : term.args()) {
    if (!first) out += ", ";
    first = false;
    out += print_logic_form(arg);
  }
  out.push_back(')');
  return out;
}

std::string to_string(PredicateClass cls) {
  switch (cls) {
    case PredicateClass::Shape: return "Shape";
    case PredicateClass::Relation: return "Relation";
    case PredicateClass::Measurement: return "Measurement";
    case PredicateClass::Numeric: return "Numeric";
    case PredicateClass::Unknown: return "Unknown";
  }
  return "Unknown";
}

void PredicateCatalog::add(const std::string& name, PredicateClass cls, int min_arity,
                           int max_arity) {
  known_[name] = Entry{cls, min_arity, max_arity};
}

bool PredicateCatalog::contains(const std::string& name) const { return known_.count(name) != 0; }

std::optional<PredicateCatalog::Entry> PredicateCatalog::lookup(const std::string& name) const {
  auto it = known_.find(name);
  if (it == known_.end()) return std::nullopt;
  return it->second;
}

const PredicateCatalog& PredicateCatalog::standard() {
  static const PredicateCatalog catalog = [] {
    PredicateCatalog c;
    // Element and shape constructors.
    c.add("Point", PredicateClass::Shape, 1, 1);
    c.add("Line", PredicateClass::Shape, 2, 2);
    c.add("Angle", PredicateClass::Shape, 1, 3);
    c.add("Arc", PredicateClass::Shape, 2, 3);
    c.add("Circle", PredicateClass::Shape, 1, 2);
    c.add("Sector", PredicateClass::Shape, 3, 3);
    c.add("Triangle", PredicateClass::Shape, 3, 3);
    c.add("Quadrilateral", PredicateClass::Shape, 4, 4);
    c.add("Parallelogram", PredicateClass::Shape, 4, 4);
    c.add("Square", PredicateClass::Shape, 4, 4);
    c.add("Rectangle", PredicateClass::Shape, 4, 4);
    c.add("Rhombus", PredicateClass::Shape, 4, 4);
    c.add("Trapezoid", PredicateClass::Shape, 4, 4);
    c.add("Kite", PredicateClass::Shape, 4, 4);
    c.add("Polygon", PredicateClass::Shape, 3, -1);
    c.add("Pentagon", PredicateClass::Shape, 5, 5);
    c.add("Hexagon", PredicateClass::Shape, 6, 6);
    c.add("Heptagon", PredicateClass::Shape, 7, 7);
    c.add("Octagon", PredicateClass::Shape, 8, 8);
    // Relations between elements.
    c.add("PointLiesOnLine", PredicateClass::Relation, 2, 2);
    c.add("PointLiesOnCircle", PredicateClass::Relation, 2, 2);
    c.add("Perpendicular", PredicateClass::Relation, 2, 2);
    c.add("Parallel", PredicateClass::Relation, 2, 2);
    c.add("IntersectAt", PredicateClass::Relation, 2, -1);
    c.add("BisectsAngle", PredicateClass::Relation, 2, 2);
    c.add("Tangent", PredicateClass::Relation, 2, 2);
    c.add("Secant", PredicateClass::Relation, 2, 2);
    c.add("CircumscribedTo", PredicateClass::Relation, 2, 2);
    c.add("InscribedIn", PredicateClass::Relation, 2, 2);
    c.add("Similar", PredicateClass::Relation, 2, 2);
    c.add("Congruent", PredicateClass::Relation, 2, 2);
    c.add("IsMidpointOf", PredicateClass::Relation, 2, 2);
    c.add("IsCentroidOf", PredicateClass::Relation, 2, 2);
    c.add("IsIncenterOf", PredicateClass::Relation, 2, 2);
    c.add("IsRadiusOf", PredicateClass::Relation, 2, 2);
    c.add("IsDiameterOf", PredicateClass::Relation, 2, 2);
    c.add("IsMidsegmentOf", PredicateClass::Relation, 2, 2);
    c.add("IsChordOf", PredicateClass::Relation, 2, 2);
    c.add("IsSideOf", PredicateClass::Relation, 2, 2);
    c.add("IsHypotenuseOf", PredicateClass::Relation, 2, 2);
    c.add("IsAltitudeOf", PredicateClass::Relation, 2, 2);
    c.add("IsMedianOf", PredicateClass::Relation, 2, 2);
    c.add("IsPerpendicularBisectorOf", PredicateClass::Relation, 2, 2);
    c.add("IsLegOf", PredicateClass::Relation, 2, 2);
    c.add("IsDiagonalOf", PredicateClass::Relation, 2, 2);
    // Measurement forms.
    c.add("Equals", PredicateClass::Measurement, 2, 2);
    c.add("LengthOf", PredicateClass::Measurement, 1, 1);
    c.add("MeasureOf", PredicateClass::Measurement, 1, 1);
    c.add("AreaOf", PredicateClass::Measurement, 1, 1);
    c.add("PerimeterOf", PredicateClass::Measurement, 1, 1);
    c.add("RadiusOf", PredicateClass::Measurement, 1, 1);
    c.add("DiameterOf", PredicateClass::Measurement, 1, 1);
    c.add("CircumferenceOf", PredicateClass::Measurement, 1, 1);
    c.add("ScaleFactorOf", PredicateClass::Measurement, 2, 2);
    c.add("RatioOf", PredicateClass::Measurement, 1, 2);
    // Arithmetic over measurements.
    c.add("Add", PredicateClass::Numeric, 2, -1);
    c.add("Sub", PredicateClass::Numeric, 2, 2);
    c.add("Mul", PredicateClass::Numeric, 2, -1);
    c.add("Div", PredicateClass::Numeric, 2, 2);
    c.add("Pow", PredicateClass::Numeric, 2, 2);
    c.add("Minus", PredicateClass::Numeric, 1, 1);
    c.add("SumOf", PredicateClass::Numeric, 2, -1);
    c.add("AverageOf", PredicateClass::Numeric, 2, -1);
    c.add("HalfOf", PredicateClass::Numeric, 1, 1);
    c.add("SquareOf", PredicateClass::Numeric, 1, 1);
    c.add("SqrtOf", PredicateClass::Numeric, 1, 1);
    c.add("SinOf", PredicateClass::Numeric, 1, 1);
    c.add("CosOf", PredicateClass::Numeric, 1, 1);
    c.add("TanOf", PredicateClass::Numeric, 1, 1);
    c.add("CotOf", PredicateClass::Numeric, 1, 1);
    return c;
  }();
  return catalog;
}

PredicateClass classify_term(const LogicTerm& term, const PredicateCatalog& catalog) {
  if (term.is_leaf()) {
    return term.leaf_kind() == LogicTerm::LeafKind::Numeric ? PredicateClass::Numeric
                                                            : PredicateClass::Unknown;
  }
  auto entry = catalog.lookup(term.functor());
  return entry ? entry->cls : PredicateClass::Unknown;
}

LogicFormFile parse_logic_form_lines(std::string_view content) {
  LogicFormFile result;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t end = content.find('\n', pos);
    std::string_view line =
        end == std::string_view::npos ? content.substr(pos) : content.substr(pos, end - pos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (!blank) {
      try {
        result.forms.emplace(line_no, parse_logic_form(line));
      } catch (const SyntaxError& e) {
        result.errors.emplace(line_no, e.what());
      }
    }
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return result;
}

LogicFormFile parse_logic_form_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open logic form file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_logic_form_lines(buf.str());
}

}  // namespace geoforge
