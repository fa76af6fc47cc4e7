#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "geoforge/logic_form.hpp"
#include "geoforge/rng.hpp"
#include "geoforge/scene.hpp"

namespace geoforge::testutil {

// The annotation block for the right-triangle-with-altitude diagram used as
// the worked example throughout the suite.
inline const std::vector<std::string>& altitude_diagram_forms() {
  static const std::vector<std::string> lines = {
      "Similar(Triangle(A,B,C),Triangle(C,B,D))",
      "Triangle(A,B,C)",
      "Triangle(A,C,B)",
      "Equals(LengthOf(Line(C, B)), 5)",
      "Equals(LengthOf(Line(C, D)), 3)",
      "Equals(LengthOf(Line(B, D)), 4)",
      "PointLiesOnLine(D, Line(A, B))",
      "Perpendicular(Line(A, C), Line(C, B))",
      "Perpendicular(Line(C, D), Line(A, D))",
  };
  return lines;
}

inline GeoScene altitude_scene() {
  std::vector<LogicTerm> forms;
  for (const auto& line : altitude_diagram_forms()) forms.push_back(parse_logic_form(line));
  return build_scene(forms);
}

// Random AST generator for round-trip property tests.
inline LogicTerm random_term(Rng& rng, int max_depth = 6, int max_arity = 5) {
  static const std::vector<std::string> identifiers = {"A",  "B",   "C",  "D",  "E",
                                                       "pt", "X1",  "y_2", "Zz", "Q"};
  static const std::vector<std::string> numerics = {"5", "0.5", "16.0", "123", "3.25", "0.125"};
  static const std::vector<std::string> expressions = {"5x+3", "2*x-1", "x^2", "\\frac{x}{2}",
                                                       "a=b?"};
  static const std::vector<std::string> functors = {"Line",   "Triangle", "Equals", "LengthOf",
                                                    "Foo",    "Bar_2",    "Perpendicular",
                                                    "Circle", "MeasureOf"};
  bool leaf = max_depth <= 1 || rng.below(3) == 0;
  if (leaf) {
    switch (rng.below(3)) {
      case 0: return LogicTerm::leaf(rng.pick(identifiers));
      case 1: return LogicTerm::leaf(rng.pick(numerics));
      default: return LogicTerm::leaf(rng.pick(expressions));
    }
  }
  int arity = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_arity)));
  std::vector<LogicTerm> args;
  for (int i = 0; i < arity; ++i) args.push_back(random_term(rng, max_depth - 1, max_arity));
  return LogicTerm::node(rng.pick(functors), std::move(args));
}

// Random consistent scene: a pool of points with declared shapes, incidences,
// relations, and measurements. Satisfies all GeoScene invariants by
// construction.
inline GeoScene random_scene(Rng& rng) {
  static const std::vector<std::string> pool = {"A", "B", "C", "D", "E", "F", "G", "H"};
  std::size_t n_points = 4 + rng.below(5);  // 4..8
  std::vector<std::string> points(pool.begin(), pool.begin() + n_points);

  std::vector<std::string> forms;
  auto tri = [&](std::size_t i, std::size_t j, std::size_t k) {
    return "Triangle(" + points[i] + ", " + points[j] + ", " + points[k] + ")";
  };

  std::size_t n_shapes = 1 + rng.below(3);
  for (std::size_t s = 0; s < n_shapes; ++s) {
    std::size_t i = rng.below(n_points), j = rng.below(n_points), k = rng.below(n_points);
    if (i == j || j == k || i == k) continue;
    forms.push_back(tri(i, j, k));
  }
  if (forms.empty()) forms.push_back(tri(0, 1, 2));

  if (rng.coin() && n_points >= 4) {
    forms.push_back("PointLiesOnLine(" + points[3] + ", Line(" + points[0] + ", " + points[1] +
                    "))");
  }
  if (rng.coin()) {
    forms.push_back("Perpendicular(Line(" + points[0] + ", " + points[2] + "), Line(" +
                    points[2] + ", " + points[1] + "))");
  }
  if (rng.coin()) {
    forms.push_back("Parallel(Line(" + points[0] + ", " + points[1] + "), Line(" + points[2] +
                    ", " + points[3 % n_points] + "))");
  }
  std::size_t n_meas = rng.below(3);
  for (std::size_t m = 0; m < n_meas; ++m) {
    std::size_t i = rng.below(n_points), j = rng.below(n_points);
    if (i == j) continue;
    forms.push_back("Equals(LengthOf(Line(" + points[i] + ", " + points[j] + ")), " +
                    std::to_string(1 + rng.below(30)) + ")");
  }

  std::vector<LogicTerm> parsed;
  for (const auto& f : forms) parsed.push_back(parse_logic_form(f));
  try {
    return build_scene(parsed);
  } catch (const InconsistencyError&) {
    // conflicting random measurements: retry without them
    std::vector<LogicTerm> no_meas;
    for (const auto& t : parsed)
      if (t.functor() != "Equals") no_meas.push_back(t);
    return build_scene(no_meas);
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::filesystem::path temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("geoforge_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace geoforge::testutil
