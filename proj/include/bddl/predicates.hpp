#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bddl/activity.hpp"
#include "bddl/kb.hpp"
#include "bddl/world.hpp"

namespace bddl {

class PredicateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Registry row: which predicates have checkers and which polarities can be
// sampled.
struct PredicateInfo {
  Predicate id;
  bool checkable;
  bool sample_true;
  bool sample_false;
};

std::span<const PredicateInfo> predicate_registry();
const PredicateInfo& registry_entry(Predicate p);
bool sampleable(Predicate p, bool desired);

// Arguments are world-level: object ids, substance synsets (or substance
// instance ids, resolved to their synset), or a room type for InRoom.
// Throws PredicateError on arity mismatch, unknown objects, or a predicate
// that is inapplicable to the first argument's synset.
bool check(const WorldState& world, const KnowledgeBase& kb, Predicate p, std::span<const std::string> args);

// Applies the literal's polarity.
bool check(const WorldState& world, const KnowledgeBase& kb, const GroundLiteral& literal);

struct SampleOptions {
  // Refuse InsideOf when the reference is openable and currently closed.
  bool require_access = false;
  std::optional<int> attempts;  // defaults to the world config
};

struct SampleResult {
  bool ok = false;
  int attempts = 0;
  std::string message;

  explicit operator bool() const { return ok; }
};

// Mutates `world` (drawing from world.rng) so that check() returns `desired`.
// On failure the world is left unchanged. Throws PredicateError for an
// unsampleable polarity or an inapplicable predicate.
SampleResult sample(WorldState& world, const KnowledgeBase& kb, Predicate p, std::span<const std::string> args,
                    bool desired, const SampleOptions& options = {});

// Shared measurements used by the checkers, the simulator and the engine.
std::string substance_key(const KnowledgeBase& kb, const std::string& arg);
PropertyParameters parameters_of(const KnowledgeBase& kb, const std::string& synset);
bool has_property(const KnowledgeBase& kb, const ObjectState& o, Property p);
std::size_t particles_inside(const WorldState& world, const ObjectState& container, const std::string& substance);
double fill_fraction(const WorldState& world, const ObjectState& container, const std::string& substance);
std::size_t contacting_particles(const WorldState& world, const ObjectState& o, const std::string& substance);
bool is_open(const ObjectState& o);
double max_keypoint_distance(const ObjectState& o);

}  // namespace bddl
