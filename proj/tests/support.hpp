#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "bddl/activity.hpp"
#include "bddl/kb.hpp"
#include "bddl/world.hpp"

namespace bddl::testing {

// Absolute path of a file under the repository's data/ directory.
std::string data_path(std::string_view relative);

const KnowledgeBase& fixture_kb();
ActivityDefinition load_problem(std::string_view name);
WorldState load_scene_named(std::string_view name);

// One rectangular kitchen with an auto floor and the agent parked in a corner.
WorldState empty_room(double width = 6.0, double depth = 6.0, std::uint64_t seed = 0);

// Adds a placed object with kb default geometry; returns a reference that is
// valid until the next insertion.
ObjectState& add_object(WorldState& world, const std::string& id, const std::string& synset, Vec3 position);

// Position resting on the floor at (x, y).
Vec3 on_floor(const std::string& synset, double x, double y);

}  // namespace bddl::testing
