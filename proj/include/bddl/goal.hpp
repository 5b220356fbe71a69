#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bddl/formula.hpp"
#include "bddl/kb.hpp"
#include "bddl/world.hpp"

namespace bddl {

class GoalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Definition instance -> world object id (or substance synset), plus the
// room chosen for each inroom-bound fixture.
struct Grounding {
  std::map<std::string, std::string> instances;
  std::map<std::string, std::string> rooms;

  friend bool operator==(const Grounding&, const Grounding&) = default;
};

struct GoalEvaluation {
  bool satisfied = false;
  double q_score = 0.0;
};

// Real world objects whose synset is the given synset or a descendant; for a
// substance synset, the matching substance systems.
std::vector<std::string> quantifier_domain(const WorldState& world, const KnowledgeBase& kb, const std::string& synset);

// Maximum matching size of a bipartite graph (Hopcroft-Karp). adjacency[i]
// lists the right vertices joined to left vertex i.
std::size_t maximum_matching(std::size_t right_count, const std::vector<std::vector<std::size_t>>& adjacency);

bool goal_satisfied(const WorldState& world, const KnowledgeBase& kb, const Grounding& grounding, const Formula& goal);

// Best satisfied-leaf fraction over all quantifier groundings and disjunct
// choices. Equals 1 exactly when the goal is satisfied.
double q_score(const WorldState& world, const KnowledgeBase& kb, const Grounding& grounding, const Formula& goal);

// Normalizes the goal first when needed.
GoalEvaluation evaluate_goal(const WorldState& world, const KnowledgeBase& kb, const Grounding& grounding,
                             const Formula& goal);

}  // namespace bddl
