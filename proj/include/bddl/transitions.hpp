#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bddl/kb.hpp"
#include "bddl/world.hpp"

namespace bddl {

class TransitionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TriggerSnapshot {
  bool toggled_on = false;
  double temperature = 0.0;
  bool contained = false;

  friend bool operator==(const TriggerSnapshot&, const TriggerSnapshot&) = default;
};

struct RuleInstance {
  std::string rule_id;
  std::string machine;
  std::vector<std::string> objects;     // bound object inputs, in rule input order
  std::vector<std::string> substances;  // bound substance synsets
  TriggerSnapshot trigger;

  friend bool operator==(const RuleInstance&, const RuleInstance&) = default;
};

struct RuleApplication {
  std::string rule_id;
  std::string machine;
  std::vector<std::string> consumed;
  std::vector<std::string> produced;
  std::size_t particles_removed = 0;
};

// Temperature seen by the machine's contents: the source temperature of an
// active heat source, otherwise the machine's own temperature.
double interior_temperature(const WorldState& world, const KnowledgeBase& kb, const ObjectState& machine);

// Rules in id order, machines in id order, inputs bound greedily in object-id
// order. Instances of one (rule, machine) pair are disjoint; instances of
// different pairs may overlap and are arbitrated by application order.
std::vector<RuleInstance> match_rules(const WorldState& world, const KnowledgeBase& kb);

// Re-verifies the instance and throws TransitionError when it went stale.
RuleApplication apply_rule(WorldState& world, const KnowledgeBase& kb, const RuleInstance& instance);

struct CleaningEffect {
  std::string substance;
  bool allowed = false;
  std::size_t removed = 0;
};

// Removes covering substances from `target` within `footprint` (default: the
// contact patch of the remover on the target). Substances whose cleaning rule
// is unmet by the remover are left untouched. Throws TransitionError when the
// remover is not a particleRemover or, without a footprint, not in contact.
std::vector<CleaningEffect> apply_cleaning(WorldState& world, const KnowledgeBase& kb, const std::string& remover,
                                           const std::string& target, std::optional<Aabb> footprint = std::nullopt);

}  // namespace bddl
