#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geoforge/trace.hpp"

namespace geoforge {

// One source problem as loaded from a dataset JSONL file.
struct QARecord {
  std::string id;
  std::string image;         // file path
  std::string image_sha256;  // content hash; loaders may precompute it
  std::string question;
  std::string answer;
  std::vector<std::string> choices;
  std::optional<char> gold_choice;  // 'A'..
  std::optional<SolutionTrace> trace;
  std::optional<int> op_count;
  std::string qtype;   // Angle | Length | Area | Other, empty when unknown
  std::string source;  // GeoQA | GeoQA+ | Geometry3K

  Json to_json() const;
  static QARecord from_json(const Json& j);
};

constexpr const char* kImagePlaceholder = "<image>";

struct Turn {
  bool from_human;
  std::string value;
};

// Training conversation in the LLaVA JSONL convention. The first human turn
// carries the image placeholder exactly once and turns alternate strictly.
struct ConversationRecord {
  std::string id;
  std::string image;
  std::vector<Turn> turns;

  void validate() const;  // throws DataError on any invariant violation
  Json to_json() const;
  static ConversationRecord from_json(const Json& j);
};

// Byte-offset loss mask over a serialized conversation: target spans are the
// assistant turns' contents, everything else is context.
struct LossSpan {
  std::size_t begin;
  std::size_t end;
  bool target;
};

struct LossSpanSpec {
  std::string text;
  std::vector<LossSpan> spans;
  std::string image;
  std::vector<std::string> warnings;

  Json to_json() const;
};

struct SerializationTemplate {
  std::string system;
  std::string human_prefix;
  std::string assistant_prefix;
  std::string turn_suffix;

  static SerializationTemplate defaults();
  Json to_json() const;
  static SerializationTemplate from_json(const Json& j);
};

// Line-oriented JSON IO with stable byte output.
std::vector<Json> read_jsonl(const std::string& path);
void write_jsonl(const std::string& path, const std::vector<Json>& rows);

}  // namespace geoforge
