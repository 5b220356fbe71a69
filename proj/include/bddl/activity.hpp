#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bddl/formula.hpp"

namespace bddl {

struct ObjectDeclaration {
  std::string instance;  // e.g. "rag.n.01_1"
  std::string synset;    // e.g. "rag.n.01"
  SourceLocation location;

  friend bool operator==(const ObjectDeclaration& a, const ObjectDeclaration& b) {
    return a.instance == b.instance && a.synset == b.synset;
  }
};

// A variable-free literal of the :init section.
struct GroundLiteral {
  Predicate predicate = Predicate::Real;
  std::vector<std::string> args;
  bool positive = true;
  SourceLocation location;

  friend bool operator==(const GroundLiteral& a, const GroundLiteral& b) {
    return a.predicate == b.predicate && a.args == b.args && a.positive == b.positive;
  }
};

// Problems in the older "igibson" domain predate substances; they are checked
// without substance semantics.
enum class Dialect { Modern, Legacy };

struct ActivityDefinition {
  std::string problem_name;
  std::string domain_name;
  std::vector<ObjectDeclaration> objects;
  std::vector<GroundLiteral> init;
  Formula goal;

  Dialect dialect() const { return domain_name == "igibson" ? Dialect::Legacy : Dialect::Modern; }
  const ObjectDeclaration* find_object(std::string_view instance) const;

  friend bool operator==(const ActivityDefinition&, const ActivityDefinition&) = default;
};

ActivityDefinition parse_problem(std::string_view text);
ActivityDefinition parse_problem_file(const std::string& path);

// Emits the same dialect as the input files; parse_problem(serialize(d)) == d.
std::string serialize_problem(const ActivityDefinition& def);
std::string serialize_formula(const Formula& f, bool goal_style = true);
std::string serialize_literal(const GroundLiteral& lit);

// `<synset>_<positive integer>`, where synset is `<lemma>.<pos>.<nn>` and the
// lemma may contain double underscores (flour__sack.n.01).
bool is_valid_synset_id(std::string_view s);
bool is_valid_instance_id(std::string_view s);
std::optional<std::string> synset_of_instance(std::string_view instance);

// Parses a single atom such as "(frozen turkey.n.01_1)" into a literal.
GroundLiteral parse_literal(std::string_view text);

}  // namespace bddl
