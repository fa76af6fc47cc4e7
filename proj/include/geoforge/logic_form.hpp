#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "geoforge/errors.hpp"

namespace geoforge {

// AST node for one logic-form statement: either a leaf (identifier, numeric
// literal, or opaque expression) or a functor application.
class LogicTerm {
public:
  enum class LeafKind { Identifier, Numeric, Expression };

  LogicTerm() = default;  // empty leaf; assign before use

  static LogicTerm leaf(std::string text);
  static LogicTerm node(std::string functor, std::vector<LogicTerm> args);

  bool is_leaf() const { return args_.empty() && functor_.empty(); }
  bool is_node() const { return !functor_.empty(); }

  // Leaf accessors.
  const std::string& text() const { return text_; }
  LeafKind leaf_kind() const { return leaf_kind_; }

  // Node accessors.
  const std::string& functor() const { return functor_; }
  const std::vector<LogicTerm>& args() const { return args_; }

  bool operator==(const LogicTerm& other) const;
  bool operator!=(const LogicTerm& other) const { return !(*this == other); }

private:
  std::string text_;
  LeafKind leaf_kind_ = LeafKind::Identifier;
  std::string functor_;
  std::vector<LogicTerm> args_;
};

enum class PredicateClass { Shape, Relation, Measurement, Numeric, Unknown };

std::string to_string(PredicateClass cls);

// Known predicate inventory with arities and classes. Uncataloged functors
// stay representable; classify_term reports them as Unknown.
class PredicateCatalog {
public:
  struct Entry {
    PredicateClass cls;
    int min_arity;
    int max_arity;  // -1 = unbounded
  };

  // The documented Geometry3K inventory.
  static const PredicateCatalog& standard();

  void add(const std::string& name, PredicateClass cls, int min_arity, int max_arity);
  bool contains(const std::string& name) const;
  std::optional<Entry> lookup(const std::string& name) const;
  const std::string& version() const { return version_; }

private:
  std::map<std::string, Entry> known_;
  std::string version_ = "geo3k-1";
};

// Parses a single statement. Whitespace is arbitrary; the printed form of the
// result, whitespace-normalized, equals the input. Throws SyntaxError with a
// byte offset and expected-token hint on malformed input.
LogicTerm parse_logic_form(std::string_view text);

// Canonical rendering: `Functor(arg1, arg2)` with a single space after each
// comma. parse_logic_form(print_logic_form(t)) is structurally equal to t.
std::string print_logic_form(const LogicTerm& term);

PredicateClass classify_term(const LogicTerm& term, const PredicateCatalog& catalog);

// One statement per line. Blank lines are skipped. Malformed lines are
// collected per line number instead of aborting the file.
struct LogicFormFile {
  std::map<std::size_t, LogicTerm> forms;    // 1-based line number -> AST
  std::map<std::size_t, std::string> errors;  // 1-based line number -> message
};

LogicFormFile parse_logic_form_file(const std::string& path);
LogicFormFile parse_logic_form_lines(std::string_view content);

}  // namespace geoforge
