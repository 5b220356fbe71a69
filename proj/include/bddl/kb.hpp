#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bddl/geometry.hpp"
#include "bddl/predicate_table.hpp"
#include "bddl/property.hpp"

namespace bddl {

class KbError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownSynset : public KbError {
 public:
  explicit UnknownSynset(std::string_view synset);
};

// Global fallback thresholds, overridable by the kb's "defaults" block.
struct Defaults {
  double onfire_temperature = 300.0;   // C
  double freeze_temperature = 0.0;     // C
  double heated_temperature = 75.0;    // C
  double boiling_temperature = 100.0;  // C
  double slice_force = 10.0;           // N
  double break_force = 300.0;          // N
  double soak_threshold = 50.0;        // particles
  double fill_threshold = 0.5;         // volume fraction
  double cover_threshold = 50.0;       // particles
  double reach_distance = 2.0;         // m
  double cook_temperature = 70.0;      // C
  double burnt_temperature = 250.0;    // C
  double heat_source_temperature = 200.0;
  double cold_source_temperature = -18.0;
  double fire_source_temperature = 800.0;
};

// Thresholds resolved for one leaf synset (kb parameter or default).
struct PropertyParameters {
  double cook_temperature;
  double burnt_temperature;
  double heat_source_temperature;
  double cold_source_temperature;
  double fire_source_temperature;
  double onfire_temperature;
  double freeze_temperature;
  double heated_temperature;
  double boiling_temperature;
  double slice_force;
  double break_force;
  double soak_threshold;
  double fill_threshold;
  double cover_threshold;
  double reach_distance;
};

struct RuleInput {
  std::string synset;
  int count = 1;
  bool consumed = true;
};

struct RuleOutput {
  std::string synset;
  int count = 1;
};

struct MachineTrigger {
  std::string synset;
  bool requires_toggled_on = false;
  std::optional<double> min_temperature;
  bool requires_containment = true;
};

struct TransitionRule {
  std::string id;
  std::vector<RuleInput> inputs;
  MachineTrigger machine;
  std::vector<RuleOutput> outputs;
  double min_duration = 0.0;  // reserved; rules fire on first satisfaction
};

// Condition-gated removal of covering substances.
struct CleaningRule {
  std::string id;
  std::vector<std::string> substances;       // covering substances this rule governs
  std::vector<std::string> remover_synsets;  // empty: any particleRemover
  std::vector<std::string> saturation;       // empty: dry removal allowed
};

struct SynsetRecord {
  std::string id;
  std::vector<std::string> parents;
  std::vector<std::string> children;
  PropertySet annotated;  // leaves only
  std::optional<Vec3> half_extents;
};

class KnowledgeBase {
 public:
  KnowledgeBase() = default;

  static KnowledgeBase from_json(const nlohmann::json& doc);
  static KnowledgeBase load_file(const std::string& path);
  nlohmann::json to_json() const;

  bool contains(std::string_view synset) const;
  bool is_leaf(std::string_view synset) const;
  const SynsetRecord& record(std::string_view synset) const;
  std::vector<std::string> synsets() const;

  // Leaf: annotated + derived properties. Non-leaf: intersection over every
  // descendant leaf, whichever path reaches it.
  PropertySet infer_properties(std::string_view synset) const;
  bool has_property(std::string_view synset, Property p) const;

  std::optional<SubstanceKind> substance_kind(std::string_view synset) const;
  bool is_substance(std::string_view synset) const { return substance_kind(synset).has_value(); }

  std::vector<std::string> descendant_leaves(std::string_view synset) const;
  bool is_a(std::string_view synset, std::string_view ancestor) const;

  // Raw per-leaf parameter lookup; throws KbError on a non-leaf synset.
  std::optional<double> parameter(std::string_view synset, std::string_view name) const;
  PropertyParameters parameters(std::string_view leaf) const;
  const Defaults& defaults() const { return defaults_; }

  const std::vector<TransitionRule>& transition_rules() const { return rules_; }
  const std::vector<CleaningRule>& cleaning_rules() const { return cleaning_rules_; }
  // Rejects rules whose synsets are unknown or whose machine lacks the
  // properties its trigger needs.
  void add_rule(TransitionRule rule);
  void add_cleaning_rule(CleaningRule rule);
  const CleaningRule* cleaning_rule_for(std::string_view substance) const;

  Vec3 default_half_extents(std::string_view synset) const;

  // Building blocks used by tests and programmatic construction. finalize()
  // recomputes derived state and enforces invariants.
  void add_synset(std::string id, std::vector<std::string> parents, PropertySet annotated = {});
  void set_parameter(std::string synset, std::string name, double value);
  void finalize();

 private:
  void check_acyclic() const;
  void validate_rule(const TransitionRule& rule) const;
  void validate_cleaning_rule(const CleaningRule& rule) const;
  PropertySet derived_leaf_properties(const SynsetRecord& r) const;
  void install_default_cleaning_rules();

  std::map<std::string, SynsetRecord, std::less<>> synsets_;
  std::map<std::string, PropertySet, std::less<>> inferred_;
  std::map<std::string, std::map<std::string, double, std::less<>>, std::less<>> parameters_;
  std::vector<TransitionRule> rules_;
  std::vector<CleaningRule> cleaning_rules_;
  Defaults defaults_;
  bool finalized_ = false;
};

// Property-to-predicate mapping plus the kinematic predicates that apply to
// every non-substance. For substances, the predicates where the substance
// fills the second (or only, for Boiled) argument.
std::set<Predicate> applicable_predicates(const KnowledgeBase& kb, std::string_view synset);

// The enabling property for a named parameter; nullopt for reach_distance.
std::optional<Property> parameter_property(std::string_view name);
bool is_known_parameter(std::string_view name);

}  // namespace bddl
