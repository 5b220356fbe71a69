#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bddl/kb.hpp"
#include "bddl/transitions.hpp"
#include "bddl/world.hpp"

namespace bddl {

struct ParticleFlow {
  std::size_t emitted = 0;
  std::size_t absorbed = 0;
  std::size_t sunk = 0;
  std::size_t consumed = 0;  // removed by transition rules
};

struct StepReport {
  std::map<std::string, ParticleFlow> flows;  // per substance
  std::vector<RuleApplication> transitions;
};

// Advances the world by `dt` seconds: temperature, soaking, emission and
// draining, then transition rules. Sources are read from the state at the
// start of the step, so the order of objects never matters.
StepReport step(WorldState& world, const KnowledgeBase& kb, double dt);

}  // namespace bddl
