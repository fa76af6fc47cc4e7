#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "geoforge/logic_form.hpp"
#include "geoforge/rational.hpp"

namespace geoforge {

using Json = nlohmann::ordered_json;

enum class QuantityKind { Length, Angle, Area, Ratio, Count, Unknown };

std::string to_string(QuantityKind kind);
std::optional<QuantityKind> quantity_kind_from_string(const std::string& name);

// Exact measured value. Angle values are degrees in (0, 360); Length and Area
// are strictly positive.
struct Quantity {
  Rational value;
  QuantityKind kind = QuantityKind::Unknown;
  std::string unit;  // may be empty

  static Quantity make(Rational value, QuantityKind kind, std::string unit = "");
};

enum class RelationKind { Perpendicular, Parallel, Similar, Congruent, Tangent, Incidence };

std::string to_string(RelationKind kind);

struct Shape {
  std::string kind;                   // Triangle, Circle, Quadrilateral, ...
  std::vector<std::string> vertices;  // ordered as declared; center name for circles

  bool operator==(const Shape& other) const = default;
};

struct Relation {
  RelationKind kind;
  LogicTerm prop;   // canonical queriable proposition, original predicate name
  std::string key;  // canonical printed form, used for dedup and ordering
};

struct Measurement {
  LogicTerm ref;  // canonicalized element reference, e.g. LengthOf(Line(B, C))
  Quantity quantity;
};

enum class Verdict { True, False, Undetermined };

std::string to_string(Verdict verdict);

// One atomic proposition from a scene and the class bucket it enumerates in.
struct Fact {
  enum class Class { Shape, Relation, Incidence, Measurement, Unrecognized };
  Class cls;
  LogicTerm prop;
};

// Normalized geometric fact base. Immutable after build_scene; queries are
// read-only and freely concurrent.
class GeoScene {
public:
  const std::set<std::string>& points() const { return points_; }
  const std::vector<Shape>& shapes() const { return shapes_; }
  const std::vector<Relation>& relations() const { return relations_; }
  const std::map<std::string, Measurement>& measurements() const { return measurements_; }
  const std::vector<std::set<std::string>>& collinear_groups() const { return groups_; }
  const std::set<std::array<std::string, 2>>& segments() const { return segments_; }
  // Forms that parsed but do not map onto the scene model. Never dropped.
  const std::vector<LogicTerm>& unrecognized() const { return unrecognized_; }

  bool empty() const {
    return points_.empty() && shapes_.empty() && relations_.empty() && measurements_.empty() &&
           unrecognized_.empty();
  }

  bool has_point(const std::string& name) const { return points_.count(name) != 0; }
  // True when both points lie on one known line.
  bool same_line(const std::string& a, const std::string& b) const;
  bool collinear(const std::string& p, const std::string& a, const std::string& b) const;

  Json to_json() const;

private:
  friend class SceneBuilder;

  std::set<std::string> points_;
  std::vector<Shape> shapes_;
  std::vector<Relation> relations_;
  std::map<std::string, Measurement> measurements_;
  std::vector<std::set<std::string>> groups_;
  std::set<std::array<std::string, 2>> segments_;
  std::vector<LogicTerm> unrecognized_;
};

// Normalizes parsed forms into a scene. Unknown-class forms land in the
// unrecognized side list. Throws InconsistencyError when two Equals facts
// assign different values to one element.
GeoScene build_scene(const std::vector<LogicTerm>& forms,
                     const PredicateCatalog& catalog = PredicateCatalog::standard());

// Entailment check against stored facts plus naming closure (shape presence
// matches on the vertex set; unordered relations are symmetric). Propositions
// naming unknown elements are Undetermined, as are proposition classes the
// scene does not model.
Verdict query(const GeoScene& scene, const LogicTerm& proposition);

// Deterministic fact listing: shapes, relations, incidences, measurements,
// then unrecognized forms; lexicographic within each class.
std::vector<Fact> enumerate_facts(const GeoScene& scene);

// Canonical key for a proposition: shape presence keys on the sorted vertex
// set, unordered relations on sorted canonical arguments. Two propositions
// with equal keys receive the same verdict.
std::string probe_key(const LogicTerm& proposition);

}  // namespace geoforge
