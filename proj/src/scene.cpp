#include "geoforge/scene.hpp"

#include <algorithm>

namespace geoforge {

namespace {

const std::set<std::string> kShapeKinds = {
    "Triangle", "Circle",  "Quadrilateral", "Parallelogram", "Square",  "Rectangle",
    "Rhombus",  "Trapezoid", "Kite",        "Polygon",       "Pentagon", "Hexagon",
    "Heptagon", "Octagon", "Sector",        "Arc"};

bool is_point_leaf(const LogicTerm& t) {
  return t.is_leaf() && t.leaf_kind() == LogicTerm::LeafKind::Identifier;
}

bool all_point_args(const LogicTerm& t) {
  for (const auto& a : t.args())
    if (!is_point_leaf(a)) return false;
  return true;
}

bool is_line_term(const LogicTerm& t) {
  return t.is_node() && t.functor() == "Line" && t.args().size() == 2 && all_point_args(t);
}

bool is_circle_term(const LogicTerm& t) {
  return t.is_node() && t.functor() == "Circle" && !t.args().empty() &&
         is_point_leaf(t.args()[0]);
}

LogicTerm canonical_line(const LogicTerm& t) {
  std::string a = t.args()[0].text();
  std::string b = t.args()[1].text();
  if (b < a) std::swap(a, b);
  return LogicTerm::node("Line", {LogicTerm::leaf(a), LogicTerm::leaf(b)});
}

LogicTerm canonical_angle(const LogicTerm& t) {
  if (t.args().size() != 3 || !all_point_args(t)) return t;
  std::string a = t.args()[0].text();
  std::string b = t.args()[1].text();
  std::string c = t.args()[2].text();
  if (c < a) std::swap(a, c);  // vertex stays in the middle
  return LogicTerm::node("Angle", {LogicTerm::leaf(a), LogicTerm::leaf(b), LogicTerm::leaf(c)});
}

// Canonical form of an element inside a measurement reference: unordered
// naming is sorted so equal elements share one key.
LogicTerm canonical_element(const LogicTerm& t) {
  if (!t.is_node()) return t;
  if (is_line_term(t)) return canonical_line(t);
  if (t.functor() == "Angle") return canonical_angle(t);
  if (kShapeKinds.count(t.functor()) != 0 && all_point_args(t) && t.functor() != "Circle" &&
      t.functor() != "Arc" && t.functor() != "Sector") {
    std::vector<std::string> names;
    for (const auto& a : t.args()) names.push_back(a.text());
    std::sort(names.begin(), names.end());
    std::vector<LogicTerm> args;
    for (auto& n : names) args.push_back(LogicTerm::leaf(n));
    return LogicTerm::node(t.functor(), std::move(args));
  }
  std::vector<LogicTerm> args;
  for (const auto& a : t.args()) args.push_back(canonical_element(a));
  return LogicTerm::node(t.functor(), std::move(args));
}

bool is_symmetric_relation(const std::string& functor) {
  return functor == "Perpendicular" || functor == "Parallel" || functor == "Similar" ||
         functor == "Congruent" || functor == "Tangent";
}

LogicTerm canonical_relation(const LogicTerm& t) {
  std::vector<LogicTerm> args;
  for (const auto& a : t.args()) args.push_back(a.is_node() ? canonical_element(a) : a);
  if (is_symmetric_relation(t.functor()) && args.size() == 2) {
    if (print_logic_form(args[1]) < print_logic_form(args[0])) std::swap(args[0], args[1]);
  }
  if ((t.functor() == "PointLiesOnLine" || t.functor() == "PointLiesOnCircle") &&
      args.size() == 2) {
    // point first, element second; element already canonical
  }
  return LogicTerm::node(t.functor(), std::move(args));
}

std::optional<RelationKind> relation_kind_for(const std::string& functor) {
  if (functor == "Perpendicular") return RelationKind::Perpendicular;
  if (functor == "Parallel") return RelationKind::Parallel;
  if (functor == "Similar") return RelationKind::Similar;
  if (functor == "Congruent") return RelationKind::Congruent;
  if (functor == "Tangent") return RelationKind::Tangent;
  if (functor == "PointLiesOnLine" || functor == "PointLiesOnCircle")
    return RelationKind::Incidence;
  return std::nullopt;
}

std::optional<QuantityKind> measurement_kind_for(const LogicTerm& ref) {
  const std::string& f = ref.functor();
  if (f == "LengthOf" || f == "PerimeterOf" || f == "RadiusOf" || f == "DiameterOf" ||
      f == "CircumferenceOf")
    return QuantityKind::Length;
  if (f == "MeasureOf") return QuantityKind::Angle;
  if (f == "AreaOf") return QuantityKind::Area;
  if (f == "RatioOf" || f == "ScaleFactorOf") return QuantityKind::Ratio;
  return std::nullopt;
}

std::optional<std::vector<std::string>> vertex_set_of(const LogicTerm& t) {
  if (!t.is_node() || !all_point_args(t)) return std::nullopt;
  std::vector<std::string> names;
  for (const auto& a : t.args()) names.push_back(a.text());
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

// Builder with mutable access to the scene internals.
class SceneBuilder {
public:
  explicit SceneBuilder(GeoScene& scene) : s_(scene) {}

  void add(const LogicTerm& form, const PredicateCatalog& catalog) {
    PredicateClass cls = classify_term(form, catalog);
    switch (cls) {
      case PredicateClass::Shape:
        if (!add_shape_form(form)) side_list(form);
        break;
      case PredicateClass::Relation:
        if (!add_relation_form(form)) side_list(form);
        break;
      case PredicateClass::Measurement:
        if (!add_measurement_form(form)) side_list(form);
        break;
      default:
        side_list(form);
        break;
    }
  }

  void finish() {
    std::sort(s_.relations_.begin(), s_.relations_.end(),
              [](const Relation& a, const Relation& b) { return a.key < b.key; });
  }

private:
  GeoScene& s_;

  void side_list(const LogicTerm& form) { s_.unrecognized_.push_back(form); }

  void add_point(const std::string& name) { s_.points_.insert(name); }

  void add_segment(const std::string& a, const std::string& b) {
    std::array<std::string, 2> seg = a < b ? std::array{a, b} : std::array{b, a};
    add_point(seg[0]);
    add_point(seg[1]);
    s_.segments_.insert(seg);
    for (auto& g : s_.groups_)
      if (g.count(seg[0]) && g.count(seg[1])) return;
    s_.groups_.push_back({seg[0], seg[1]});
  }

  void add_collinear(const std::string& p, const std::string& a, const std::string& b) {
    add_segment(a, b);
    add_point(p);
    for (auto& g : s_.groups_) {
      if (g.count(a) && g.count(b)) {
        g.insert(p);
        merge_groups();
        return;
      }
    }
  }

  // Two groups sharing two points name the same line.
  void merge_groups() {
    bool merged = true;
    while (merged) {
      merged = false;
      for (std::size_t i = 0; i < s_.groups_.size() && !merged; ++i) {
        for (std::size_t j = i + 1; j < s_.groups_.size() && !merged; ++j) {
          int shared = 0;
          for (const auto& p : s_.groups_[j])
            if (s_.groups_[i].count(p)) ++shared;
          if (shared >= 2) {
            s_.groups_[i].insert(s_.groups_[j].begin(), s_.groups_[j].end());
            s_.groups_.erase(s_.groups_.begin() + static_cast<long>(j));
            merged = true;
          }
        }
      }
    }
  }

  void register_element(const LogicTerm& t) {
    if (t.is_leaf()) {
      if (is_point_leaf(t)) add_point(t.text());
      return;
    }
    if (is_line_term(t)) {
      add_segment(t.args()[0].text(), t.args()[1].text());
      return;
    }
    if (kShapeKinds.count(t.functor()) != 0 && all_point_args(t)) {
      register_shape(t);
      return;
    }
    for (const auto& a : t.args()) register_element(a);
  }

  void register_shape(const LogicTerm& t) {
    Shape shape;
    shape.kind = t.functor();
    for (const auto& a : t.args()) {
      shape.vertices.push_back(a.text());
      add_point(a.text());
    }
    if (std::find(s_.shapes_.begin(), s_.shapes_.end(), shape) == s_.shapes_.end())
      s_.shapes_.push_back(shape);
  }

  bool add_shape_form(const LogicTerm& form) {
    if (!form.is_node()) return false;
    if (is_line_term(form)) {
      add_segment(form.args()[0].text(), form.args()[1].text());
      return true;
    }
    if (form.functor() == "Point" && form.args().size() == 1 && all_point_args(form)) {
      add_point(form.args()[0].text());
      return true;
    }
    if (form.functor() == "Angle") {
      if (!all_point_args(form)) return false;
      for (const auto& a : form.args()) add_point(a.text());
      return true;
    }
    if (kShapeKinds.count(form.functor()) != 0 && all_point_args(form)) {
      register_shape(form);
      return true;
    }
    return false;
  }

  bool add_relation_form(const LogicTerm& form) {
    auto kind = relation_kind_for(form.functor());
    if (!kind) return false;

    if (form.functor() == "PointLiesOnLine") {
      if (form.args().size() != 2 || !is_point_leaf(form.args()[0]) ||
          !is_line_term(form.args()[1]))
        return false;
      add_collinear(form.args()[0].text(), form.args()[1].args()[0].text(),
                    form.args()[1].args()[1].text());
      push_relation(RelationKind::Incidence, canonical_relation(form));
      return true;
    }
    if (form.functor() == "PointLiesOnCircle") {
      if (form.args().size() != 2 || !is_point_leaf(form.args()[0]) ||
          !is_circle_term(form.args()[1]))
        return false;
      add_point(form.args()[0].text());
      register_shape(form.args()[1]);
      push_relation(RelationKind::Incidence, canonical_relation(form));
      return true;
    }
    if (form.args().size() != 2) return false;
    for (const auto& a : form.args()) {
      if (!a.is_node()) return false;
      register_element(a);
    }
    push_relation(*kind, canonical_relation(form));
    return true;
  }

  void push_relation(RelationKind kind, LogicTerm prop) {
    std::string key = print_logic_form(prop);
    for (const auto& r : s_.relations_)
      if (r.key == key) return;
    s_.relations_.push_back(Relation{kind, std::move(prop), std::move(key)});
  }

  bool add_measurement_form(const LogicTerm& form) {
    if (!form.is_node() || form.functor() != "Equals" || form.args().size() != 2) return false;
    const LogicTerm& lhs = form.args()[0];
    const LogicTerm& rhs = form.args()[1];

    bool lhs_ref = lhs.is_node() && measurement_kind_for(lhs).has_value();
    bool rhs_ref = rhs.is_node() && measurement_kind_for(rhs).has_value();

    if (lhs_ref && rhs_ref && lhs.functor() == rhs.functor()) {
      // Equal measures of two elements: stored as congruence.
      LogicTerm a = canonical_element(lhs.args()[0]);
      LogicTerm b = canonical_element(rhs.args()[0]);
      register_element(a);
      register_element(b);
      if (print_logic_form(b) < print_logic_form(a)) std::swap(a, b);
      push_relation(RelationKind::Congruent, LogicTerm::node("Congruent", {a, b}));
      return true;
    }

    const LogicTerm* ref = lhs_ref ? &lhs : (rhs_ref ? &rhs : nullptr);
    const LogicTerm* val = lhs_ref ? &rhs : &lhs;
    if (ref == nullptr) return false;
    if (!val->is_leaf() || val->leaf_kind() != LogicTerm::LeafKind::Numeric) return false;

    auto value = parse_decimal(val->text());
    if (!value) return false;
    QuantityKind kind = *measurement_kind_for(*ref);
    if (ref->functor() == "MeasureOf" && !ref->args().empty() && ref->args()[0].is_node() &&
        ref->args()[0].functor() != "Angle" && ref->args()[0].functor() != "Arc")
      kind = QuantityKind::Unknown;

    LogicTerm canon_ref = canonical_element(*ref);
    for (const auto& a : canon_ref.args()) register_element(a);

    Quantity qty;
    try {
      qty = Quantity::make(*value, kind);
    } catch (const DataError&) {
      return false;  // out-of-range value, keep the raw form in the side list
    }

    std::string key = print_logic_form(canon_ref);
    auto it = s_.measurements_.find(key);
    if (it != s_.measurements_.end()) {
      if (it->second.quantity.value != qty.value)
        throw InconsistencyError("conflicting values for " + key + ": " +
                                 format_rational(it->second.quantity.value) + " vs " +
                                 format_rational(qty.value));
      return true;
    }
    s_.measurements_.emplace(key, Measurement{canon_ref, qty});
    return true;
  }
};

std::string to_string(QuantityKind kind) {
  switch (kind) {
    case QuantityKind::Length: return "Length";
    case QuantityKind::Angle: return "Angle";
    case QuantityKind::Area: return "Area";
    case QuantityKind::Ratio: return "Ratio";
    case QuantityKind::Count: return "Count";
    case QuantityKind::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::optional<QuantityKind> quantity_kind_from_string(const std::string& name) {
  if (name == "Length") return QuantityKind::Length;
  if (name == "Angle") return QuantityKind::Angle;
  if (name == "Area") return QuantityKind::Area;
  if (name == "Ratio") return QuantityKind::Ratio;
  if (name == "Count") return QuantityKind::Count;
  if (name == "Unknown") return QuantityKind::Unknown;
  return std::nullopt;
}

std::string to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::Perpendicular: return "Perpendicular";
    case RelationKind::Parallel: return "Parallel";
    case RelationKind::Similar: return "Similar";
    case RelationKind::Congruent: return "Congruent";
    case RelationKind::Tangent: return "Tangent";
    case RelationKind::Incidence: return "Incidence";
  }
  return "Incidence";
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::True: return "True";
    case Verdict::False: return "False";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

Quantity Quantity::make(Rational value, QuantityKind kind, std::string unit) {
  if (kind == QuantityKind::Angle && (value <= 0 || value >= 360))
    throw DataError("angle measure out of range (0, 360): " + format_rational(value));
  if ((kind == QuantityKind::Length || kind == QuantityKind::Area) && value <= 0)
    throw DataError(to_string(kind) + " must be positive: " + format_rational(value));
  return Quantity{std::move(value), kind, std::move(unit)};
}

bool GeoScene::same_line(const std::string& a, const std::string& b) const {
  for (const auto& g : groups_)
    if (g.count(a) && g.count(b)) return true;
  return false;
}

bool GeoScene::collinear(const std::string& p, const std::string& a, const std::string& b) const {
  for (const auto& g : groups_)
    if (g.count(p) && g.count(a) && g.count(b)) return true;
  return false;
}

GeoScene build_scene(const std::vector<LogicTerm>& forms, const PredicateCatalog& catalog) {
  GeoScene scene;
  SceneBuilder builder(scene);
  for (const auto& form : forms) builder.add(form, catalog);
  builder.finish();
  return scene;
}

Verdict query(const GeoScene& scene, const LogicTerm& prop) {
  if (!prop.is_node()) return Verdict::Undetermined;
  const std::string& f = prop.functor();

  // Shape presence: the vertex set names the shape, order is immaterial.
  if (kShapeKinds.count(f) != 0) {
    auto probe_set = vertex_set_of(prop);
    if (!probe_set) return Verdict::Undetermined;
    for (const auto& name : *probe_set)
      if (!scene.has_point(name)) return Verdict::Undetermined;
    for (const auto& shape : scene.shapes()) {
      if (shape.kind != f) continue;
      std::vector<std::string> names = shape.vertices;
      std::sort(names.begin(), names.end());
      if (names == *probe_set) return Verdict::True;
    }
    return Verdict::False;
  }

  if (f == "Line" && prop.args().size() == 2 && all_point_args(prop)) {
    const std::string& a = prop.args()[0].text();
    const std::string& b = prop.args()[1].text();
    if (!scene.has_point(a) || !scene.has_point(b)) return Verdict::Undetermined;
    return scene.same_line(a, b) ? Verdict::True : Verdict::False;
  }

  if (f == "PointLiesOnLine" && prop.args().size() == 2 && is_point_leaf(prop.args()[0]) &&
      is_line_term(prop.args()[1])) {
    const std::string& p = prop.args()[0].text();
    const std::string& a = prop.args()[1].args()[0].text();
    const std::string& b = prop.args()[1].args()[1].text();
    if (!scene.has_point(p) || !scene.has_point(a) || !scene.has_point(b))
      return Verdict::Undetermined;
    return scene.collinear(p, a, b) ? Verdict::True : Verdict::False;
  }

  auto kind = relation_kind_for(f);
  if (!kind) return Verdict::Undetermined;

  // Relation probes: unknown points are Undetermined, otherwise membership.
  std::vector<std::string> named;
  std::vector<const LogicTerm*> stack{&prop};
  while (!stack.empty()) {
    const LogicTerm* t = stack.back();
    stack.pop_back();
    if (t->is_leaf()) {
      if (is_point_leaf(*t)) named.push_back(t->text());
      continue;
    }
    for (const auto& a : t->args()) stack.push_back(&a);
  }
  for (const auto& name : named)
    if (!scene.has_point(name)) return Verdict::Undetermined;

  if ((f == "Similar" || f == "Congruent") && prop.args().size() == 2 &&
      prop.args()[0].is_node() && prop.args()[1].is_node() &&
      kShapeKinds.count(prop.args()[0].functor()) != 0) {
    auto set_a = vertex_set_of(prop.args()[0]);
    auto set_b = vertex_set_of(prop.args()[1]);
    if (!set_a || !set_b) return Verdict::Undetermined;
    for (const auto& rel : scene.relations()) {
      if (rel.kind != *relation_kind_for(f)) continue;
      if (rel.prop.functor() != f) continue;
      auto stored_a = vertex_set_of(rel.prop.args()[0]);
      auto stored_b = vertex_set_of(rel.prop.args()[1]);
      if (!stored_a || !stored_b) continue;
      bool same = (*stored_a == *set_a && *stored_b == *set_b) ||
                  (*stored_a == *set_b && *stored_b == *set_a);
      if (same && prop.args()[0].functor() == rel.prop.args()[0].functor() &&
          prop.args()[1].functor() == rel.prop.args()[1].functor())
        return Verdict::True;
    }
    return Verdict::False;
  }

  std::string key = print_logic_form(canonical_relation(prop));
  for (const auto& rel : scene.relations())
    if (rel.key == key) return Verdict::True;
  return Verdict::False;
}

std::vector<Fact> enumerate_facts(const GeoScene& scene) {
  std::vector<Fact> facts;

  std::vector<LogicTerm> shape_props;
  for (const auto& shape : scene.shapes()) {
    std::vector<LogicTerm> args;
    for (const auto& v : shape.vertices) args.push_back(LogicTerm::leaf(v));
    shape_props.push_back(LogicTerm::node(shape.kind, std::move(args)));
  }
  auto by_print = [](const LogicTerm& a, const LogicTerm& b) {
    return print_logic_form(a) < print_logic_form(b);
  };
  std::sort(shape_props.begin(), shape_props.end(), by_print);
  for (auto& p : shape_props) facts.push_back(Fact{Fact::Class::Shape, std::move(p)});

  std::vector<LogicTerm> rel_props, inc_props;
  for (const auto& rel : scene.relations()) {
    if (rel.kind == RelationKind::Incidence)
      inc_props.push_back(rel.prop);
    else
      rel_props.push_back(rel.prop);
  }
  std::sort(rel_props.begin(), rel_props.end(), by_print);
  std::sort(inc_props.begin(), inc_props.end(), by_print);
  for (auto& p : rel_props) facts.push_back(Fact{Fact::Class::Relation, std::move(p)});
  for (auto& p : inc_props) facts.push_back(Fact{Fact::Class::Incidence, std::move(p)});

  std::vector<LogicTerm> meas_props;
  for (const auto& [key, m] : scene.measurements()) {
    meas_props.push_back(LogicTerm::node(
        "Equals", {m.ref, LogicTerm::leaf(format_rational(m.quantity.value))}));
  }
  std::sort(meas_props.begin(), meas_props.end(), by_print);
  for (auto& p : meas_props) facts.push_back(Fact{Fact::Class::Measurement, std::move(p)});

  std::vector<LogicTerm> other = scene.unrecognized();
  std::sort(other.begin(), other.end(), by_print);
  for (auto& p : other) facts.push_back(Fact{Fact::Class::Unrecognized, std::move(p)});

  return facts;
}

std::string probe_key(const LogicTerm& prop) {
  if (!prop.is_node()) return print_logic_form(prop);
  const std::string& f = prop.functor();
  if (kShapeKinds.count(f) != 0) {
    auto set = vertex_set_of(prop);
    if (set) {
      std::string key = "shape:" + f;
      for (const auto& v : *set) key += ":" + v;
      return key;
    }
  }
  if ((f == "Similar" || f == "Congruent") && prop.args().size() == 2 &&
      prop.args()[0].is_node() && kShapeKinds.count(prop.args()[0].functor()) != 0) {
    auto set_a = vertex_set_of(prop.args()[0]);
    auto set_b = vertex_set_of(prop.args()[1]);
    if (set_a && set_b) {
      auto join = [](const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) out += ":" + s;
        return out;
      };
      std::string ka = prop.args()[0].functor() + join(*set_a);
      std::string kb = prop.args()[1].functor() + join(*set_b);
      if (kb < ka) std::swap(ka, kb);
      return f + ":" + ka + "|" + kb;
    }
  }
  return print_logic_form(canonical_relation(prop));
}

Json GeoScene::to_json() const {
  Json j;
  j["points"] = points_;
  Json segs = Json::array();
  for (const auto& s : segments_) segs.push_back({s[0], s[1]});
  j["segments"] = std::move(segs);
  Json groups = Json::array();
  std::vector<std::vector<std::string>> sorted_groups;
  for (const auto& g : groups_) sorted_groups.emplace_back(g.begin(), g.end());
  std::sort(sorted_groups.begin(), sorted_groups.end());
  for (const auto& g : sorted_groups) groups.push_back(g);
  j["collinear_groups"] = std::move(groups);
  Json shapes = Json::array();
  for (const auto& s : shapes_) shapes.push_back({{"kind", s.kind}, {"vertices", s.vertices}});
  j["shapes"] = std::move(shapes);
  Json rels = Json::array();
  for (const auto& r : relations_)
    rels.push_back({{"kind", to_string(r.kind)}, {"prop", print_logic_form(r.prop)}});
  j["relations"] = std::move(rels);
  Json meas = Json::array();
  for (const auto& [key, m] : measurements_) {
    meas.push_back({{"ref", key},
                    {"value", format_rational(m.quantity.value)},
                    {"kind", to_string(m.quantity.kind)},
                    {"unit", m.quantity.unit}});
  }
  j["measurements"] = std::move(meas);
  Json other = Json::array();
  for (const auto& t : unrecognized_) other.push_back(print_logic_form(t));
  j["unrecognized"] = std::move(other);
  return j;
}

}  // namespace geoforge
