#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geoforge/rng.hpp"
#include "geoforge/scene.hpp"

namespace geoforge {

class ExhaustedError : public DataError {
public:
  using DataError::DataError;
};

class NoNegativeFoundError : public DataError {
public:
  using DataError::DataError;
};

enum class PairStrategy {
  PresencePositive,
  PresenceNegative,
  RelationPositive,
  RelationNegative,
  NamingEquivalence,
};

std::string to_string(PairStrategy strategy);

// One verified yes/no question about a diagram's basic elements. The answer
// starts with its polarity token; negative answers carry a corrective clause
// stating a true fact.
struct ContrastivePair {
  enum class Polarity { Yes, No };

  std::string question;
  std::string answer;
  Polarity polarity;
  LogicTerm probe;
  PairStrategy strategy;

  Json to_json() const;
};

// Mutates a fact that is true in the scene into a proposition the scene
// refutes: swap one point for another scene point, flip the relation kind, or
// recombine declared vertices into an undeclared shape. Bounded retries;
// throws NoNegativeFoundError when no falsifiable mutation exists.
LogicTerm perturb_probe(const LogicTerm& fact, const GeoScene& scene, std::uint64_t seed);
LogicTerm perturb_probe(const LogicTerm& fact, const GeoScene& scene, Rng& rng);

// Up to n pairs, deduplicated by probe, roughly balanced between yes and no,
// deterministic given the seed. Every emitted pair's polarity equals the
// scene-oracle verdict of its probe. Throws ExhaustedError when the scene
// admits no probe at all.
std::vector<ContrastivePair> generate_pairs(const GeoScene& scene, std::size_t n,
                                            std::uint64_t seed);

}  // namespace geoforge
