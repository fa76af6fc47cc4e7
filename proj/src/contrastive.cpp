#include "geoforge/contrastive.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>

#include "geoforge/caption.hpp"

namespace geoforge {

namespace {

constexpr int kPerturbRetries = 64;

std::vector<std::string> collect_points(const LogicTerm& term) {
  std::vector<std::string> out;
  std::vector<const LogicTerm*> stack{&term};
  while (!stack.empty()) {
    const LogicTerm* t = stack.back();
    stack.pop_back();
    if (t->is_leaf()) {
      if (t->leaf_kind() == LogicTerm::LeafKind::Identifier) out.push_back(t->text());
      continue;
    }
    for (const auto& a : t->args()) stack.push_back(&a);
  }
  return out;
}

std::string vertex_string(const LogicTerm& shape) {
  std::string out;
  for (const auto& a : shape.args()) out += a.text();
  return out;
}

std::vector<std::string> vertex_list(const LogicTerm& shape) {
  std::vector<std::string> out;
  for (const auto& a : shape.args()) out.push_back(a.text());
  return out;
}

std::string lowercase_first(std::string text) {
  if (!text.empty())
    text[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(text[0])));
  return text;
}

std::string kind_word(const std::string& functor) {
  std::string out = functor;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool is_shape_probe(const LogicTerm& probe) {
  static const std::set<std::string> kinds = {"Triangle",      "Circle",   "Quadrilateral",
                                              "Parallelogram", "Square",   "Rectangle",
                                              "Rhombus",       "Trapezoid", "Kite",
                                              "Polygon",       "Pentagon", "Hexagon"};
  return probe.is_node() && kinds.count(probe.functor()) != 0;
}

std::string presence_question(const LogicTerm& probe, Rng& rng) {
  if (probe.functor() == "Circle") {
    const std::string& name = probe.args()[0].text();
    switch (rng.below(3)) {
      case 0: return "Does the diagram contain a circle centered at " + name + "?";
      case 1: return "Is there a circle denoted as circle " + name + " in the figure?";
      default: return "Does the figure include circle " + name + "?";
    }
  }
  std::string word = kind_word(probe.functor());
  std::string listed = oxford_list(vertex_list(probe));
  switch (rng.below(3)) {
    case 0: return "Does the diagram include a " + word + " formed by vertices " + listed + "?";
    case 1: return "Does the diagram contain a " + word + " with vertices " + listed + "?";
    default:
      return "Is there a " + word + " " + vertex_string(probe) + " in the figure?";
  }
}

std::string relation_question(const LogicTerm& probe, Rng& rng) {
  const std::string& f = probe.functor();
  if (f == "PointLiesOnLine") {
    const std::string& p = probe.args()[0].text();
    std::string seg = element_phrase(probe.args()[1]);
    switch (rng.below(3)) {
      case 0: return "Does point " + p + " lie on the " + seg + "?";
      case 1: return "Is point " + p + " on the " + seg + "?";
      default: return "Does the " + seg + " pass through point " + p + "?";
    }
  }
  if (f == "PointLiesOnCircle") {
    const std::string& p = probe.args()[0].text();
    std::string circle = element_phrase(probe.args()[1]);
    switch (rng.below(3)) {
      case 0: return "Does point " + p + " lie on " + circle + "?";
      case 1: return "Is point " + p + " on " + circle + "?";
      default: return "Does " + circle + " pass through point " + p + "?";
    }
  }
  std::string a = element_phrase(probe.args()[0]);
  std::string b = element_phrase(probe.args()[1]);
  std::string verb = f == "Perpendicular" ? "perpendicular to"
                     : f == "Parallel"    ? "parallel to"
                     : f == "Similar"     ? "similar to"
                     : f == "Congruent"   ? "congruent to"
                                          : "tangent to";
  switch (rng.below(3)) {
    case 0: return "Is " + a + " " + verb + " " + b + "?";
    case 1: return "Are " + a + " and " + b + " " + verb.substr(0, verb.size() - 3) + "?";
    default: return "Does the figure show " + a + " " + verb + " " + b + "?";
  }
}

std::string negated_statement(const LogicTerm& probe) {
  const std::string& f = probe.functor();
  if (is_shape_probe(probe)) {
    if (f == "Circle")
      return "the diagram does not include a circle centered at " + probe.args()[0].text() + ".";
    return "the diagram does not include a " + kind_word(f) + " formed by vertices " +
           oxford_list(vertex_list(probe)) + ".";
  }
  if (f == "PointLiesOnLine" || f == "PointLiesOnCircle")
    return "point " + probe.args()[0].text() + " does not lie on the " +
           element_phrase(probe.args()[1]) + ".";
  std::string a = element_phrase(probe.args()[0]);
  std::string b = element_phrase(probe.args()[1]);
  std::string verb = f == "Perpendicular" ? "perpendicular"
                     : f == "Parallel"    ? "parallel"
                     : f == "Similar"     ? "similar"
                     : f == "Congruent"   ? "congruent"
                                          : "tangent";
  return a + " is not " + verb + " to " + b + ".";
}

// The nearest true fact sharing an element with the probe; ties break on the
// printed fact.
std::string corrective_clause(const GeoScene& scene, const LogicTerm& probe) {
  std::vector<std::string> probe_points = collect_points(probe);
  std::set<std::string> probe_set(probe_points.begin(), probe_points.end());

  const Fact* best = nullptr;
  std::size_t best_shared = 0;
  std::string best_key;
  std::vector<Fact> facts = enumerate_facts(scene);
  for (const auto& fact : facts) {
    if (fact.cls == Fact::Class::Unrecognized) continue;
    if (probe_key(fact.prop) == probe_key(probe)) continue;
    std::size_t shared = 0;
    for (const auto& p : collect_points(fact.prop))
      if (probe_set.count(p)) ++shared;
    std::string key = print_logic_form(fact.prop);
    if (best == nullptr || shared > best_shared ||
        (shared == best_shared && key < best_key)) {
      best = &fact;
      best_shared = shared;
      best_key = key;
    }
  }
  if (best == nullptr) return "";
  return render_fact_sentence(*best);
}

struct PairBuild {
  std::string question;
  std::string answer;
};

PairBuild build_yes(const GeoScene& scene, const LogicTerm& probe, PairStrategy strategy,
                    Rng& rng) {
  PairBuild out;
  if (strategy == PairStrategy::NamingEquivalence || is_shape_probe(probe)) {
    out.question = presence_question(probe, rng);
    if (probe.functor() == "Circle") {
      out.answer = "Yes, the diagram contains circle " + probe.args()[0].text() + ".";
      return out;
    }
    std::string probe_name = vertex_string(probe);
    // Find the declared vertex order to confirm naming equivalence.
    std::string declared;
    auto probe_verts = vertex_list(probe);
    std::sort(probe_verts.begin(), probe_verts.end());
    for (const auto& shape : scene.shapes()) {
      if (shape.kind != probe.functor()) continue;
      auto sorted = shape.vertices;
      std::sort(sorted.begin(), sorted.end());
      if (sorted == probe_verts) {
        declared.clear();
        for (const auto& v : shape.vertices) declared += v;
        if (declared == probe_name) break;  // exact declaration wins
      }
    }
    std::string word = kind_word(probe.functor());
    if (!declared.empty() && declared != probe_name) {
      out.answer = "Yes, the diagram contains " + word + " " + probe_name +
                   ", which is the same as " + word + " " + declared + ".";
    } else {
      out.answer = "Yes, the diagram contains " + word + " " + probe_name + ".";
    }
    return out;
  }
  out.question = relation_question(probe, rng);
  Fact fact{Fact::Class::Relation, probe};
  out.answer = "Yes, " + lowercase_first(render_fact_sentence(fact));
  return out;
}

PairBuild build_no(const GeoScene& scene, const LogicTerm& probe, Rng& rng) {
  PairBuild out;
  out.question = is_shape_probe(probe) ? presence_question(probe, rng)
                                       : relation_question(probe, rng);
  std::string corrective = corrective_clause(scene, probe);
  out.answer = "No, " + negated_statement(probe);
  if (!corrective.empty()) out.answer += " " + corrective;
  return out;
}

}  // namespace

std::string to_string(PairStrategy strategy) {
  switch (strategy) {
    case PairStrategy::PresencePositive: return "PresencePositive";
    case PairStrategy::PresenceNegative: return "PresenceNegative";
    case PairStrategy::RelationPositive: return "RelationPositive";
    case PairStrategy::RelationNegative: return "RelationNegative";
    case PairStrategy::NamingEquivalence: return "NamingEquivalence";
  }
  return "PresencePositive";
}

Json ContrastivePair::to_json() const {
  return Json{{"question", question},
              {"answer", answer},
              {"polarity", polarity == Polarity::Yes ? "Yes" : "No"},
              {"probe", print_logic_form(probe)},
              {"strategy", to_string(strategy)}};
}

LogicTerm perturb_probe(const LogicTerm& fact, const GeoScene& scene, std::uint64_t seed) {
  Rng rng(seed);
  return perturb_probe(fact, scene, rng);
}

LogicTerm perturb_probe(const LogicTerm& fact, const GeoScene& scene, Rng& rng) {
  std::vector<std::string> points(scene.points().begin(), scene.points().end());
  const std::string original_key = probe_key(fact);

  auto try_candidate = [&](const LogicTerm& candidate) -> bool {
    if (probe_key(candidate) == original_key) return false;
    return query(scene, candidate) == Verdict::False;
  };

  // Replaces the i-th identifier leaf (depth-first) with a new name.
  std::function<LogicTerm(const LogicTerm&, int&, int, const std::string&)> replace_nth =
      [&](const LogicTerm& t, int& counter, int target, const std::string& name) -> LogicTerm {
    if (t.is_leaf()) {
      if (t.leaf_kind() == LogicTerm::LeafKind::Identifier && counter++ == target)
        return LogicTerm::leaf(name);
      return t;
    }
    std::vector<LogicTerm> args;
    for (const auto& a : t.args()) args.push_back(replace_nth(a, counter, target, name));
    return LogicTerm::node(t.functor(), std::move(args));
  };

  for (int attempt = 0; attempt < kPerturbRetries; ++attempt) {
    LogicTerm candidate = fact;
    std::uint64_t mode = rng.below(3);

    if (is_shape_probe(fact) && mode != 2 && points.size() > fact.args().size()) {
      // Recombine declared points into an undeclared shape.
      std::vector<std::string> pool = points;
      rng.shuffle(pool);
      std::vector<LogicTerm> args;
      for (std::size_t i = 0; i < fact.args().size() && i < pool.size(); ++i)
        args.push_back(LogicTerm::leaf(pool[i]));
      if (args.size() != fact.args().size()) continue;
      candidate = LogicTerm::node(fact.functor(), std::move(args));
    } else if (mode == 2 && fact.is_node()) {
      // Flip the relation kind.
      static const std::map<std::string, std::string> flips = {
          {"Perpendicular", "Parallel"},
          {"Parallel", "Perpendicular"},
          {"Similar", "Congruent"},
          {"Congruent", "Similar"},
      };
      auto it = flips.find(fact.functor());
      if (it == flips.end()) continue;
      candidate = LogicTerm::node(it->second, fact.args());
    } else {
      // Swap one named point for another scene point.
      std::vector<std::string> named = collect_points(fact);
      if (named.empty() || points.size() < 2) continue;
      int target = static_cast<int>(rng.below(named.size()));
      const std::string& replacement = rng.pick(points);
      if (replacement == named[static_cast<std::size_t>(target)]) continue;
      int counter = 0;
      candidate = replace_nth(fact, counter, target, replacement);
    }

    if (try_candidate(candidate)) return candidate;
  }
  throw NoNegativeFoundError("no falsifiable mutation found for " + print_logic_form(fact));
}

std::vector<ContrastivePair> generate_pairs(const GeoScene& scene, std::size_t n,
                                            std::uint64_t seed) {
  if (n < 1) throw DataError("pair count must be at least 1");

  std::vector<LogicTerm> positives;
  for (const auto& fact : enumerate_facts(scene)) {
    if (fact.cls == Fact::Class::Shape || fact.cls == Fact::Class::Relation ||
        fact.cls == Fact::Class::Incidence)
      positives.push_back(fact.prop);
  }
  if (positives.empty()) throw ExhaustedError("scene admits no probes");

  Rng rng(seed);
  std::vector<LogicTerm> yes_queue = positives;
  std::vector<LogicTerm> no_queue = positives;
  rng.shuffle(yes_queue);
  rng.shuffle(no_queue);

  std::vector<ContrastivePair> pairs;
  std::set<std::string> seen;
  std::size_t yes_count = 0, no_count = 0;
  std::size_t yes_next = 0, no_next = 0;

  auto emit_yes = [&]() -> bool {
    while (yes_next < yes_queue.size()) {
      LogicTerm base = yes_queue[yes_next++];
      LogicTerm probe = base;
      PairStrategy strategy =
          is_shape_probe(base) ? PairStrategy::PresencePositive : PairStrategy::RelationPositive;
      if (is_shape_probe(base) && base.args().size() >= 3 && rng.below(2) == 0) {
        // Permuted naming of the same declared shape.
        std::vector<LogicTerm> args = base.args();
        rng.shuffle(args);
        LogicTerm renamed = LogicTerm::node(base.functor(), std::move(args));
        if (print_logic_form(renamed) != print_logic_form(base)) {
          probe = renamed;
          strategy = PairStrategy::NamingEquivalence;
        }
      }
      if (!seen.insert(probe_key(probe)).second) continue;
      if (query(scene, probe) != Verdict::True) continue;
      PairBuild built = build_yes(scene, probe, strategy, rng);
      pairs.push_back(ContrastivePair{built.question, built.answer,
                                      ContrastivePair::Polarity::Yes, probe, strategy});
      ++yes_count;
      return true;
    }
    return false;
  };

  auto emit_no = [&]() -> bool {
    std::size_t tried = 0;
    while (tried < no_queue.size()) {
      const LogicTerm& base = no_queue[no_next % no_queue.size()];
      ++no_next;
      ++tried;
      LogicTerm probe;
      try {
        probe = perturb_probe(base, scene, rng);
      } catch (const NoNegativeFoundError&) {
        continue;
      }
      if (!seen.insert(probe_key(probe)).second) continue;
      PairStrategy strategy = is_shape_probe(probe) ? PairStrategy::PresenceNegative
                                                    : PairStrategy::RelationNegative;
      PairBuild built = build_no(scene, probe, rng);
      pairs.push_back(ContrastivePair{built.question, built.answer,
                                      ContrastivePair::Polarity::No, probe, strategy});
      ++no_count;
      return true;
    }
    return false;
  };

  bool yes_open = true, no_open = true;
  while (pairs.size() < n && (yes_open || no_open)) {
    bool want_yes = yes_count <= no_count ? yes_open : !no_open;
    if (want_yes) {
      if (!emit_yes()) {
        yes_open = false;
        if (!emit_no()) no_open = false;
      }
    } else {
      if (!emit_no()) {
        no_open = false;
        if (!emit_yes()) yes_open = false;
      }
    }
  }

  if (pairs.empty()) throw ExhaustedError("could not generate any verified pair");
  return pairs;
}

}  // namespace geoforge
