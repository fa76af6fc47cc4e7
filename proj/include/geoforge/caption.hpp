#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "geoforge/llm_client.hpp"
#include "geoforge/records.hpp"
#include "geoforge/scene.hpp"

namespace geoforge {

// Geometric image description: one sentence per atomic fact plus a summary
// paragraph.
struct Description {
  enum class Provenance { Template, Llm };

  std::vector<std::string> info_items;
  std::string summary;
  Provenance provenance = Provenance::Template;
  std::string model;      // set for Llm provenance
  std::string cache_key;  // set for Llm provenance

  Json to_json() const;
};

// Directory of UTF-8 prompt files, one per prompt name, with {placeholder}
// substitution. Prompt text is configuration, not code.
class PromptCatalog {
public:
  static PromptCatalog load(const std::filesystem::path& dir);
  // The prompts shipped with the repo, compiled in as a fallback so the
  // toolkit works without a catalog directory.
  static const PromptCatalog& builtin();

  bool contains(const std::string& name) const { return prompts_.count(name) != 0; }
  const std::string& raw(const std::string& name) const;
  std::string render(const std::string& name,
                     const std::map<std::string, std::string>& vars) const;

private:
  std::map<std::string, std::string> prompts_;
};

// English sentence for one enumerated fact.
std::string render_fact_sentence(const Fact& fact);

// Human name for an element term: "line segment AB", "triangle ABC",
// "circle O".
std::string element_phrase(const LogicTerm& term);

// "A, B, and C"
std::string oxford_list(const std::vector<std::string>& items);

// Deterministic templated description: one info item per enumerated fact and
// a summary built from grouped facts (shapes, measurements, relations).
Description describe_scene(const GeoScene& scene);

// Full training-caption text for a description (info items plus summary).
std::string caption_text(const Description& desc);

// Figure description recovered from the QA text by the language model. The
// response is stored verbatim as the summary.
Description recover_caption(const QARecord& record, CompletionClient& client,
                            const PromptCatalog& catalog = PromptCatalog::builtin(),
                            const std::string& model = "gpt-3.5-turbo-0613");

// One fact extracted from problem text: the logic-form proposition and the
// source substring it was read from.
struct ExtractedFact {
  LogicTerm prop;
  std::string surface;
};

// Offline pattern rules over common phrasings. Recall-oriented but precision
// mandatory: every emitted fact is literally stated in the text.
std::vector<ExtractedFact> extract_facts_rule_based(const QARecord& record);

// Template description assembled from rule-extracted facts; the offline
// fallback for caption recovery.
Description describe_from_facts(const std::vector<ExtractedFact>& facts);

}  // namespace geoforge
