#include "geoforge/caption.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <regex>
#include <set>
#include <sstream>

namespace geoforge {

namespace {

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += n;
  return out;
}

}  // namespace

// "5, 3, and 4" / "5 and 3" / "5"
std::string oxford_list(const std::vector<std::string>& items) {
  if (items.empty()) return "";
  if (items.size() == 1) return items[0];
  if (items.size() == 2) return items[0] + " and " + items[1];
  std::string out;
  for (std::size_t i = 0; i + 1 < items.size(); ++i) out += items[i] + ", ";
  out += "and " + items.back();
  return out;
}

namespace {

std::string depluralize_underscores(const std::string& text) {
  std::string out = text;
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

}  // namespace

// Human name for an element term: "line segment AB", "triangle ABC", ...
std::string element_phrase(const LogicTerm& term) {
  if (term.is_leaf()) return depluralize_underscores(term.text());
  const std::string& f = term.functor();
  std::vector<std::string> names;
  for (const auto& a : term.args()) names.push_back(a.is_leaf() ? a.text() : element_phrase(a));
  if (f == "Line") return "line segment " + join_names(names);
  if (f == "Angle") return "angle " + join_names(names);
  if (f == "Circle") return "circle " + names[0];
  if (f == "Arc") return "arc " + join_names(names);
  std::string kind = f;
  std::transform(kind.begin(), kind.end(), kind.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return kind + " " + join_names(names);
}

namespace {

std::string value_with_unit(const Rational& value, QuantityKind kind) {
  std::string v = format_rational(value);
  switch (kind) {
    case QuantityKind::Angle: return v + " degrees";
    case QuantityKind::Area: return v + " square units";
    case QuantityKind::Length: return v + " units";
    default: return v;
  }
}

std::string measurement_sentence(const LogicTerm& ref, const Rational& value) {
  const std::string& f = ref.functor();
  const LogicTerm& elem = ref.args()[0];
  if (f == "LengthOf")
    return "The length of the " + element_phrase(elem) + " is " +
           value_with_unit(value, QuantityKind::Length) + ".";
  if (f == "MeasureOf")
    return "The measure of " + element_phrase(elem) + " is " +
           value_with_unit(value, QuantityKind::Angle) + ".";
  if (f == "AreaOf")
    return "The area of the " + element_phrase(elem) + " is " +
           value_with_unit(value, QuantityKind::Area) + ".";
  if (f == "PerimeterOf")
    return "The perimeter of the " + element_phrase(elem) + " is " +
           value_with_unit(value, QuantityKind::Length) + ".";
  if (f == "RadiusOf")
    return "The radius of " + element_phrase(elem) + " is " +
           value_with_unit(value, QuantityKind::Length) + ".";
  if (f == "DiameterOf")
    return "The diameter of " + element_phrase(elem) + " is " +
           value_with_unit(value, QuantityKind::Length) + ".";
  if (f == "CircumferenceOf")
    return "The circumference of " + element_phrase(elem) + " is " +
           value_with_unit(value, QuantityKind::Length) + ".";
  return "The " + f + " of " + element_phrase(elem) + " is " + format_rational(value) + ".";
}

std::string capitalized(std::string text) {
  if (!text.empty()) text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  return text;
}

}  // namespace

std::string render_fact_sentence(const Fact& fact) {
  const LogicTerm& p = fact.prop;
  if (fact.cls == Fact::Class::Unrecognized)
    return "The annotation also states: " + print_logic_form(p) + ".";
  if (!p.is_node()) return "The annotation also states: " + print_logic_form(p) + ".";

  const std::string& f = p.functor();
  if (fact.cls == Fact::Class::Shape) {
    if (f == "Triangle") {
      std::vector<std::string> names;
      for (const auto& a : p.args()) names.push_back(a.text());
      return "The figure represents a triangle with vertices " + oxford_list(names) + ".";
    }
    if (f == "Circle") return "The figure contains a circle denoted as circle " +
                              p.args()[0].text() + ".";
    std::vector<std::string> names;
    for (const auto& a : p.args()) names.push_back(a.text());
    std::string kind = f;
    std::transform(kind.begin(), kind.end(), kind.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return "The figure contains a " + kind + " with vertices " + oxford_list(names) + ".";
  }

  if (f == "PointLiesOnLine")
    return "Point " + p.args()[0].text() + " lies on the " + element_phrase(p.args()[1]) + ".";
  if (f == "PointLiesOnCircle")
    return "Point " + p.args()[0].text() + " lies on " + element_phrase(p.args()[1]) + ".";
  if (f == "Perpendicular")
    return capitalized(element_phrase(p.args()[0])) + " is perpendicular to " +
           element_phrase(p.args()[1]) + ".";
  if (f == "Parallel")
    return capitalized(element_phrase(p.args()[0])) + " is parallel to " +
           element_phrase(p.args()[1]) + ".";
  if (f == "Similar")
    return capitalized(element_phrase(p.args()[0])) + " is similar to " +
           element_phrase(p.args()[1]) + ".";
  if (f == "Congruent")
    return capitalized(element_phrase(p.args()[0])) + " is congruent to " +
           element_phrase(p.args()[1]) + ".";
  if (f == "Tangent")
    return capitalized(element_phrase(p.args()[0])) + " is tangent to " +
           element_phrase(p.args()[1]) + ".";
  if (f == "CircumscribedTo")
    return capitalized(element_phrase(p.args()[0])) + " is the circumscribed circle of " +
           element_phrase(p.args()[1]) + ".";
  if (f == "InscribedIn")
    return capitalized(element_phrase(p.args()[0])) + " is inscribed in " +
           element_phrase(p.args()[1]) + ".";
  if (f == "Equals" && p.args().size() == 2 && p.args()[0].is_node()) {
    auto value = parse_rational_text(p.args()[1].text());
    if (value) return measurement_sentence(p.args()[0], *value);
  }
  return "The annotation also states: " + print_logic_form(p) + ".";
}

Description describe_scene(const GeoScene& scene) {
  Description desc;
  desc.provenance = Description::Provenance::Template;

  std::vector<Fact> facts = enumerate_facts(scene);
  for (const auto& fact : facts) desc.info_items.push_back(render_fact_sentence(fact));

  if (facts.empty()) return desc;

  std::vector<std::string> sentences;

  // Shapes.
  std::vector<std::string> shape_phrases;
  for (const auto& fact : facts)
    if (fact.cls == Fact::Class::Shape) shape_phrases.push_back(element_phrase(fact.prop));
  if (!shape_phrases.empty())
    sentences.push_back("The figure depicts " + oxford_list(shape_phrases) + ".");

  // Segment lengths are grouped into one sentence; other measurements keep
  // their own sentence.
  std::vector<std::string> segment_names, segment_values;
  std::vector<std::string> other_measurements;
  for (const auto& fact : facts) {
    if (fact.cls != Fact::Class::Measurement) continue;
    const LogicTerm& ref = fact.prop.args()[0];
    if (ref.functor() == "LengthOf" && ref.args()[0].is_node() &&
        ref.args()[0].functor() == "Line") {
      segment_names.push_back(join_names({ref.args()[0].args()[0].text(),
                                          ref.args()[0].args()[1].text()}));
      segment_values.push_back(fact.prop.args()[1].text());
    } else {
      other_measurements.push_back(render_fact_sentence(fact));
    }
  }
  if (segment_names.size() == 1) {
    sentences.push_back("The length of the segment " + segment_names[0] + " is " +
                        segment_values[0] + " units.");
  } else if (!segment_names.empty()) {
    sentences.push_back("The lengths of the segments " + oxford_list(segment_names) + " are " +
                        oxford_list(segment_values) + " units respectively.");
  }
  for (auto& s : other_measurements) sentences.push_back(std::move(s));

  // Relations, incidences, leftovers.
  for (const auto& fact : facts) {
    if (fact.cls == Fact::Class::Relation || fact.cls == Fact::Class::Incidence ||
        fact.cls == Fact::Class::Unrecognized)
      sentences.push_back(render_fact_sentence(fact));
  }

  std::string summary;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i) summary += " ";
    summary += sentences[i];
  }
  desc.summary = summary;
  return desc;
}

std::string caption_text(const Description& desc) {
  if (desc.info_items.empty()) return desc.summary;
  std::string out = "The geometric figure has the following information:\n";
  for (std::size_t i = 0; i < desc.info_items.size(); ++i)
    out += "Info " + std::to_string(i + 1) + ": " + desc.info_items[i] + "\n";
  out += "Summary: " + desc.summary;
  return out;
}

Json Description::to_json() const {
  Json j;
  j["info_items"] = info_items;
  j["summary"] = summary;
  j["provenance"] = provenance == Provenance::Template ? "template" : "llm";
  if (!model.empty()) j["model"] = model;
  if (!cache_key.empty()) j["cache_key"] = cache_key;
  return j;
}

PromptCatalog PromptCatalog::load(const std::filesystem::path& dir) {
  PromptCatalog catalog;
  if (!std::filesystem::is_directory(dir))
    throw ConfigError("prompt catalog directory not found: " + dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".txt") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    catalog.prompts_[entry.path().stem().string()] = buf.str();
  }
  return catalog;
}

const PromptCatalog& PromptCatalog::builtin() {
  static const PromptCatalog catalog = [] {
    PromptCatalog c;
    c.prompts_["caption_recovery"] =
        "You are given a geometry problem and its solution. Infer what the figure must show "
        "and write a concise description of the visible geometric elements only: shapes, "
        "points, lines, circles, and the relationships among them. Do not mention the "
        "question, the solution steps, or any value that cannot be read off the figure.\n"
        "\n"
        "Question: {question}\n"
        "Answer: {answer}\n"
        "\n"
        "Description:";
    c.prompts_["phase1_describe"] =
        "Translate the following machine-readable annotations of a geometric figure into "
        "clear English. First list one short sentence per annotation, prefixed with "
        "'Info N:'. Then write a 'Summary:' paragraph that covers the shapes, the stated "
        "measurements, and the relationships among the elements.\n"
        "\n"
        "Annotations:\n"
        "{logic_forms}\n";
    c.prompts_["paraphrase"] =
        "Rewrite the following question and answer with different wording. Keep every "
        "number exactly as written and keep the final answer value unchanged. Reply in "
        "exactly this format:\n"
        "Q: <rewritten question>\n"
        "A: <rewritten answer>\n"
        "\n"
        "Question: {question}\n"
        "Answer: {answer}";
    return c;
  }();
  return catalog;
}

const std::string& PromptCatalog::raw(const std::string& name) const {
  auto it = prompts_.find(name);
  if (it == prompts_.end()) throw ConfigError("unknown prompt: " + name);
  return it->second;
}

std::string PromptCatalog::render(const std::string& name,
                                  const std::map<std::string, std::string>& vars) const {
  std::string out = raw(name);
  for (const auto& [key, value] : vars) {
    std::string needle = "{" + key + "}";
    for (std::size_t pos = out.find(needle); pos != std::string::npos;
         pos = out.find(needle, pos + value.size()))
      out.replace(pos, needle.size(), value);
  }
  return out;
}

Description recover_caption(const QARecord& record, CompletionClient& client,
                            const PromptCatalog& catalog, const std::string& model) {
  if (record.question.empty() || record.answer.empty())
    throw DataError("caption recovery needs a non-empty question and answer: " + record.id);

  ChatRequest req;
  req.model = model;
  req.temperature = 0.0;
  req.messages.push_back(ChatMessage{
      "user",
      catalog.render("caption_recovery",
                     {{"question", record.question}, {"answer", record.answer}})});

  std::string response = client.complete(req);
  if (response.find_first_not_of(" \t\r\n") == std::string::npos) throw EmptyResponseError();

  Description desc;
  desc.provenance = Description::Provenance::Llm;
  desc.summary = response;
  desc.model = model;
  desc.cache_key = canonical_key(req);
  return desc;
}

namespace {

struct Match {
  std::size_t pos;
  ExtractedFact fact;
};

std::string snake(const std::string& phrase) {
  std::string out;
  for (char c : phrase) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      out.push_back(c);
    else if (!out.empty() && out.back() != '_')
      out.push_back('_');
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

void scan(const std::string& text, const std::regex& re,
          const std::function<std::optional<LogicTerm>(const std::smatch&)>& build,
          std::vector<Match>& out) {
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re);
       it != std::sregex_iterator(); ++it) {
    auto prop = build(*it);
    if (!prop) continue;
    out.push_back(Match{static_cast<std::size_t>(it->position(0)),
                        ExtractedFact{*prop, it->str(0)}});
  }
}

LogicTerm point(const std::string& name) { return LogicTerm::leaf(name); }

LogicTerm line_term(const std::string& a, const std::string& b) {
  return LogicTerm::node("Line", {point(a), point(b)});
}

std::optional<LogicTerm> angle_term(const std::string& letters) {
  std::vector<LogicTerm> args;
  for (char c : letters) args.push_back(point(std::string(1, c)));
  if (args.empty() || args.size() == 2) return std::nullopt;
  return LogicTerm::node("Angle", std::move(args));
}

}  // namespace

std::vector<ExtractedFact> extract_facts_rule_based(const QARecord& record) {
  const std::string text = record.question + "\n" + record.answer;
  std::vector<Match> matches;

  static const std::regex circumscribed(
      R"(circle ([A-Z]) is the circumscribed circle of (?:the )?triangle ([A-Z])\s*([A-Z])\s*([A-Z]))");
  scan(text, circumscribed,
       [](const std::smatch& m) -> std::optional<LogicTerm> {
         return LogicTerm::node(
             "CircumscribedTo",
             {LogicTerm::node("Circle", {point(m[1])}),
              LogicTerm::node("Triangle", {point(m[2]), point(m[3]), point(m[4])})});
       },
       matches);

  static const std::regex inscribed(
      R"(triangle ([A-Z])\s*([A-Z])\s*([A-Z]) is inscribed in circle ([A-Z]))");
  scan(text, inscribed,
       [](const std::smatch& m) -> std::optional<LogicTerm> {
         return LogicTerm::node(
             "InscribedIn",
             {LogicTerm::node("Triangle", {point(m[1]), point(m[2]), point(m[3])}),
              LogicTerm::node("Circle", {point(m[4])})});
       },
       matches);

  static const std::regex angle_value(R"(angle ([A-Z]{1,3})\s*(?:=|is)\s*(\d+(?:\.\d+)?))");
  scan(text, angle_value,
       [](const std::smatch& m) -> std::optional<LogicTerm> {
         auto value = parse_decimal(m[2].str());
         auto angle = angle_term(m[1].str());
         if (!value || !angle || *value <= 0 || *value >= 360) return std::nullopt;
         return LogicTerm::node("Equals", {LogicTerm::node("MeasureOf", {*angle}),
                                           LogicTerm::leaf(m[2].str())});
       },
       matches);

  static const std::regex segment_value(R"(\b([A-Z])([A-Z])\s*=\s*(\d+(?:\.\d+)?))");
  scan(text, segment_value,
       [](const std::smatch& m) -> std::optional<LogicTerm> {
         auto value = parse_decimal(m[3].str());
         if (!value || *value <= 0) return std::nullopt;
         return LogicTerm::node("Equals", {LogicTerm::node("LengthOf", {line_term(m[1], m[2])}),
                                           LogicTerm::leaf(m[3].str())});
       },
       matches);

  static const std::regex segment_equal(R"(\b([A-Z])([A-Z])\s*=\s*([A-Z])([A-Z])\b)");
  scan(text, segment_equal,
       [](const std::smatch& m) -> std::optional<LogicTerm> {
         return LogicTerm::node("Equals",
                                {LogicTerm::node("LengthOf", {line_term(m[1], m[2])}),
                                 LogicTerm::node("LengthOf", {line_term(m[3], m[4])})});
       },
       matches);

  static const std::regex noun_length(
      R"(the length of the ([a-z][a-z ]*?) is (\d+(?:\.\d+)?))");
  scan(text, noun_length,
       [](const std::smatch& m) -> std::optional<LogicTerm> {
         auto value = parse_decimal(m[2].str());
         if (!value || *value <= 0) return std::nullopt;
         std::string name = snake(m[1].str());
         if (name.empty()) return std::nullopt;
         return LogicTerm::node("Equals", {LogicTerm::node("LengthOf", {LogicTerm::leaf(name)}),
                                           LogicTerm::leaf(m[2].str())});
       },
       matches);

  static const std::regex on_line(
      R"(point ([A-Z]) (?:the )?lies on (?:the )?line(?: segment)? ([A-Z])\s*([A-Z]))");
  scan(text, on_line,
       [](const std::smatch& m) -> std::optional<LogicTerm> {
         return LogicTerm::node("PointLiesOnLine", {point(m[1]), line_term(m[2], m[3])});
       },
       matches);

  static const std::regex perpendicular(
      R"((?:line segment |segment )?\b([A-Z])([A-Z]) is perpendicular to (?:line segment |segment )?([A-Z])([A-Z])\b)");
  scan(text, perpendicular,
       [](const std::smatch& m) -> std::optional<LogicTerm> {
         return LogicTerm::node("Perpendicular",
                                {line_term(m[1], m[2]), line_term(m[3], m[4])});
       },
       matches);

  static const std::regex parallel(
      R"((?:line segment |segment )?\b([A-Z])([A-Z]) is parallel to (?:line segment |segment )?([A-Z])([A-Z])\b)");
  scan(text, parallel,
       [](const std::smatch& m) -> std::optional<LogicTerm> {
         return LogicTerm::node("Parallel", {line_term(m[1], m[2]), line_term(m[3], m[4])});
       },
       matches);

  static const std::regex triangle_mention(R"(triangle ([A-Z])\s*([A-Z])\s*([A-Z]))");
  scan(text, triangle_mention,
       [](const std::smatch& m) -> std::optional<LogicTerm> {
         return LogicTerm::node("Triangle", {point(m[1]), point(m[2]), point(m[3])});
       },
       matches);

  std::stable_sort(matches.begin(), matches.end(),
                   [](const Match& a, const Match& b) { return a.pos < b.pos; });

  std::vector<ExtractedFact> facts;
  std::set<std::string> seen;
  for (auto& m : matches) {
    std::string key = print_logic_form(m.fact.prop);
    if (seen.insert(key).second) facts.push_back(std::move(m.fact));
  }
  return facts;
}

Description describe_from_facts(const std::vector<ExtractedFact>& facts) {
  Description desc;
  desc.provenance = Description::Provenance::Template;
  std::string summary;
  for (const auto& f : facts) {
    Fact fact;
    fact.prop = f.prop;
    const std::string& functor = f.prop.is_node() ? f.prop.functor() : "";
    if (functor == "Equals")
      fact.cls = Fact::Class::Measurement;
    else if (functor == "PointLiesOnLine" || functor == "PointLiesOnCircle")
      fact.cls = Fact::Class::Incidence;
    else if (functor == "Triangle" || functor == "Circle" || functor == "Quadrilateral")
      fact.cls = Fact::Class::Shape;
    else
      fact.cls = Fact::Class::Relation;
    std::string sentence = render_fact_sentence(fact);
    desc.info_items.push_back(sentence);
    if (!summary.empty()) summary += " ";
    summary += sentence;
  }
  desc.summary = summary;
  return desc;
}

}  // namespace geoforge
