#include "support.hpp"

#include <nlohmann/json.hpp>

namespace bddl::testing {

std::string data_path(std::string_view relative) { return std::string(BDDLKIT_DATA_DIR) + "/" + std::string(relative); }

const KnowledgeBase& fixture_kb() {
  static const KnowledgeBase kb = KnowledgeBase::load_file(data_path("kb/fixture_kb.json"));
  return kb;
}

ActivityDefinition load_problem(std::string_view name) {
  return parse_problem_file(data_path("problems/" + std::string(name) + ".bddl"));
}

WorldState load_scene_named(std::string_view name) {
  return load_scene_file(data_path("scenes/" + std::string(name) + ".json"), fixture_kb());
}

WorldState empty_room(double width, double depth, std::uint64_t seed) {
  nlohmann::json doc = {{"schema", "bddlkit.world/1"},
                        {"rooms", {{{"id", "kitchen_0"}, {"type", "kitchen"}, {"rects", {{0, 0, width, depth}}}}}},
                        {"objects", nlohmann::json::array()},
                        {"agent", {{"position", {0.3, 0.3}}}}};
  WorldState w = load_scene(doc, fixture_kb());
  w.rng.reseed(seed);
  return w;
}

ObjectState& add_object(WorldState& world, const std::string& id, const std::string& synset, Vec3 position) {
  ObjectState o = make_default_object(fixture_kb(), id, synset, world.config.ambient_temperature);
  o.position = position;
  o.placed = true;
  world.objects.insert_or_assign(id, std::move(o));
  return world.object(id);
}

Vec3 on_floor(const std::string& synset, double x, double y) {
  return {x, y, fixture_kb().default_half_extents(synset).z};
}

}  // namespace bddl::testing
