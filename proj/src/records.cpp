#include "geoforge/records.hpp"

#include <fstream>

namespace geoforge {

Json QARecord::to_json() const {
  Json j;
  j["id"] = id;
  j["image"] = image;
  if (!image_sha256.empty()) j["image_sha256"] = image_sha256;
  j["question"] = question;
  j["answer"] = answer;
  if (!choices.empty()) j["choices"] = choices;
  if (gold_choice) j["gold"] = std::string(1, *gold_choice);
  if (trace) j["trace"] = trace->to_json();
  if (op_count) j["op_count"] = *op_count;
  if (!qtype.empty()) j["qtype"] = qtype;
  if (!source.empty()) j["source"] = source;
  return j;
}

QARecord QARecord::from_json(const Json& j) {
  QARecord r;
  r.id = j.value("id", std::string());
  r.image = j.value("image", std::string());
  r.image_sha256 = j.value("image_sha256", std::string());
  r.question = j.value("question", std::string());
  r.answer = j.value("answer", std::string());
  if (j.contains("choices")) r.choices = j.at("choices").get<std::vector<std::string>>();
  if (j.contains("gold")) {
    std::string g = j.at("gold").get<std::string>();
    if (g.size() != 1 || g[0] < 'A' || g[0] > 'Z')
      throw DataError("record " + r.id + ": gold choice must be a single letter");
    int index = g[0] - 'A';
    if (r.choices.empty() || index >= static_cast<int>(r.choices.size()))
      throw DataError("record " + r.id + ": gold choice does not index into choices");
    r.gold_choice = g[0];
  }
  if (j.contains("trace")) r.trace = SolutionTrace::from_json(j.at("trace"));
  if (j.contains("op_count")) {
    int n = j.at("op_count").get<int>();
    if (n < 1) throw DataError("record " + r.id + ": op_count must be >= 1");
    r.op_count = n;
  }
  r.qtype = j.value("qtype", std::string());
  r.source = j.value("source", std::string());
  return r;
}

void ConversationRecord::validate() const {
  if (turns.size() < 2) throw DataError("conversation " + id + ": needs at least 2 turns");
  for (std::size_t i = 0; i < turns.size(); ++i) {
    bool expect_human = i % 2 == 0;
    if (turns[i].from_human != expect_human)
      throw DataError("conversation " + id + ": turns must alternate starting with human");
  }
  std::size_t count = 0;
  for (std::size_t pos = turns[0].value.find(kImagePlaceholder); pos != std::string::npos;
       pos = turns[0].value.find(kImagePlaceholder, pos + 1))
    ++count;
  for (std::size_t i = 1; i < turns.size(); ++i)
    if (turns[i].value.find(kImagePlaceholder) != std::string::npos)
      throw DataError("conversation " + id + ": image placeholder outside first turn");
  if (count != 1)
    throw DataError("conversation " + id + ": image placeholder must appear exactly once");
}

Json ConversationRecord::to_json() const {
  Json j;
  j["id"] = id;
  j["image"] = image;
  Json conv = Json::array();
  for (const auto& t : turns)
    conv.push_back(Json{{"from", t.from_human ? "human" : "gpt"}, {"value", t.value}});
  j["conversations"] = std::move(conv);
  j["version"] = "geoforge.conv.v1";
  return j;
}

ConversationRecord ConversationRecord::from_json(const Json& j) {
  ConversationRecord r;
  r.id = j.value("id", std::string());
  r.image = j.value("image", std::string());
  for (const auto& t : j.at("conversations")) {
    std::string from = t.at("from").get<std::string>();
    r.turns.push_back(Turn{from == "human", t.at("value").get<std::string>()});
  }
  return r;
}

Json LossSpanSpec::to_json() const {
  Json j;
  j["text"] = text;
  Json arr = Json::array();
  for (const auto& s : spans)
    arr.push_back(Json{{"begin", s.begin}, {"end", s.end}, {"role", s.target ? "target" : "context"}});
  j["spans"] = std::move(arr);
  j["image"] = image;
  if (!warnings.empty()) j["warnings"] = warnings;
  return j;
}

SerializationTemplate SerializationTemplate::defaults() {
  SerializationTemplate t;
  t.system =
      "A chat between a curious human and an artificial intelligence assistant. "
      "The assistant gives helpful, detailed, and polite answers to the human's questions.";
  t.human_prefix = "USER: ";
  t.assistant_prefix = "ASSISTANT: ";
  t.turn_suffix = "\n";
  return t;
}

Json SerializationTemplate::to_json() const {
  return Json{{"system", system},
              {"human_prefix", human_prefix},
              {"assistant_prefix", assistant_prefix},
              {"turn_suffix", turn_suffix}};
}

SerializationTemplate SerializationTemplate::from_json(const Json& j) {
  SerializationTemplate t = defaults();
  t.system = j.value("system", t.system);
  t.human_prefix = j.value("human_prefix", t.human_prefix);
  t.assistant_prefix = j.value("assistant_prefix", t.assistant_prefix);
  t.turn_suffix = j.value("turn_suffix", t.turn_suffix);
  return t;
}

std::vector<Json> read_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  std::vector<Json> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      rows.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": bad JSON: " + e.what());
    }
  }
  return rows;
}

void write_jsonl(const std::string& path, const std::vector<Json>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write: " + path);
  for (const auto& row : rows) out << row.dump() << '\n';
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace geoforge
