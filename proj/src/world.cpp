#include "bddl/world.hpp"

#include <algorithm>
#include <cmath>

#include "bddl/kb.hpp"

namespace bddl {

namespace {

Vec3 rotate_yaw(Vec3 v, double yaw) {
  if (yaw == 0.0) return v;
  double c = std::cos(yaw), s = std::sin(yaw);
  return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
}

}  // namespace

double Joint::displacement(double from, double to) const {
  double d = std::abs(to - from);
  return type == JointType::Prismatic ? d : link_radius * d;
}

std::optional<Aabb> ObjectState::container_box() const {
  if (!container) return std::nullopt;
  return Aabb::from_center(position + rotate_yaw(container->offset, yaw),
                           rotated_half_extents(container->half_extents, yaw));
}

bool Room::contains(double x, double y) const {
  return std::any_of(rects.begin(), rects.end(), [&](const Rect& r) { return r.contains(x, y); });
}

ObjectState& WorldState::object(std::string_view id) {
  auto it = objects.find(std::string(id));
  if (it == objects.end()) throw WorldError("unknown object '" + std::string(id) + "'");
  return it->second;
}

const ObjectState& WorldState::object(std::string_view id) const {
  auto it = objects.find(std::string(id));
  if (it == objects.end()) throw WorldError("unknown object '" + std::string(id) + "'");
  return it->second;
}

const ObjectState* WorldState::find(std::string_view id) const {
  auto it = objects.find(std::string(id));
  return it == objects.end() ? nullptr : &it->second;
}

ObjectState* WorldState::find(std::string_view id) {
  auto it = objects.find(std::string(id));
  return it == objects.end() ? nullptr : &it->second;
}

const Room* WorldState::room_at(double x, double y) const {
  for (const auto& r : rooms)
    if (r.contains(x, y)) return &r;
  return nullptr;
}

ParticleSystem& WorldState::system(const std::string& synset, SubstanceKind kind) {
  auto it = substances.find(synset);
  if (it != substances.end()) return it->second;
  ParticleSystem s;
  s.synset = synset;
  s.kind = kind;
  s.particle_volume = config.liquid_particle_volume;
  s.base_temperature = config.ambient_temperature;
  return substances.emplace(synset, std::move(s)).first->second;
}

std::string WorldState::fresh_id(const std::string& synset) {
  int& k = fresh_counters[synset];
  std::string id;
  do {
    id = synset + "_" + std::to_string(++k);
  } while (objects.count(id));
  return id;
}

const std::array<Vec3, 8>& horizontal_directions() {
  // Diagonals share one magnitude so that both components divide identically.
  static const double d = std::sqrt(0.5);
  static const std::array<Vec3, 8> dirs{{
      {1, 0, 0}, {d, d, 0}, {0, 1, 0}, {-d, d, 0}, {-1, 0, 0}, {-d, -d, 0}, {0, -1, 0}, {d, -d, 0},
  }};
  return dirs;
}

std::vector<RayHit> ray_query(const WorldState& world, Vec3 origin, Vec3 direction, std::string_view exclude) {
  double n = direction.norm();
  if (n == 0.0) return {};
  Vec3 dir = direction * (1.0 / n);
  if (direction.x == 0.0) dir.x = 0.0;
  if (direction.y == 0.0) dir.y = 0.0;
  if (direction.z == 0.0) dir.z = 0.0;
  std::vector<RayHit> hits;
  for (const auto& [id, o] : world.objects) {
    if (!o.spatial() || id == exclude) continue;
    double t = ray_box_distance(origin, dir, o.box());
    if (t >= 0.0) hits.push_back({id, t});
  }
  std::stable_sort(hits.begin(), hits.end(), [](const RayHit& a, const RayHit& b) { return a.distance < b.distance; });
  return hits;
}

bool in_contact(const WorldState& world, const ObjectState& a, const ObjectState& b) {
  if (!a.spatial() || !b.spatial() || a.id == b.id) return false;
  // The held object is rigidly attached to the agent, not resting on it.
  if (world.agent.held && ((a.id == kAgentId && b.id == *world.agent.held) ||
                           (b.id == kAgentId && a.id == *world.agent.held)))
    return false;
  return box_distance(a.box(), b.box()) <= world.config.contact_epsilon;
}

void apply_default_features(const KnowledgeBase& kb, ObjectState& o) {
  if (!kb.contains(o.synset)) return;
  Vec3 h = o.half_extents;
  PropertySet props = kb.infer_properties(o.synset);
  if (props.contains(Property::Fillable))
    o.container = ContainerVolume{{0, 0, 0.1 * h.z}, {0.9 * h.x, 0.9 * h.y, 0.9 * h.z}};
  if (props.contains(Property::Openable)) o.joints.push_back({"door", JointType::Prismatic, 0.0, 0.3, 0.0, true, 0.5});
  if (props.contains(Property::Toggleable)) o.toggle_point = Vec3{0, 0, h.z};
  if (props.contains(Property::WaterSource) || props.contains(Property::ParticleSource))
    o.source_point = Vec3{0, 0, h.z};
}

ObjectState make_default_object(const KnowledgeBase& kb, std::string id, const std::string& leaf_synset,
                                double ambient) {
  ObjectState o;
  o.id = std::move(id);
  o.synset = leaf_synset;
  o.placed = false;
  o.temperature = ambient;
  o.max_temperature = ambient;
  if (!kb.contains(leaf_synset)) return o;
  o.half_extents = kb.default_half_extents(leaf_synset);
  apply_default_features(kb, o);
  return o;
}

namespace {

std::vector<std::string> split_object(WorldState& world, std::string_view target, const std::string& piece_synset,
                                      bool mark_half, bool broken) {
  ObjectState& whole = world.object(target);
  if (!whole.real) throw WorldError("cannot split non-real object '" + whole.id + "'");
  int axis = 0;
  for (int a = 1; a < 3; ++a)
    if (whole.half_extents[a] > whole.half_extents[axis]) axis = a;
  Vec3 half = whole.half_extents;
  half[axis] *= 0.5;
  Vec3 offset;
  offset[axis] = half[axis];
  offset = rotate_yaw(offset, whole.yaw);

  std::vector<std::string> ids;
  for (int side : {-1, 1}) {
    ObjectState piece;
    piece.id = world.fresh_id(piece_synset);
    piece.synset = piece_synset;
    piece.placed = whole.placed;
    piece.position = whole.position + offset * static_cast<double>(side);
    piece.yaw = whole.yaw;
    piece.half_extents = half;
    piece.temperature = whole.temperature;
    piece.max_temperature = whole.max_temperature;
    piece.soaked = whole.soaked;
    piece.covered = whole.covered;
    piece.toggled_on = whole.toggled_on;
    piece.broken = broken;
    piece.sliced_half = mark_half;
    ids.push_back(piece.id);
    world.objects.emplace(piece.id, std::move(piece));
  }
  ObjectState& original = world.object(target);
  original.real = false;
  original.replaced_by = ids;
  for (const auto& other : original.connected_to)
    if (auto* o = world.find(other)) o->connected_to.erase(original.id);
  original.connected_to.clear();
  if (world.agent.held == original.id) world.agent.held.reset();
  return ids;
}

}  // namespace

std::vector<std::string> slice_object(WorldState& world, const KnowledgeBase& kb, std::string_view target) {
  ObjectState& o = world.object(target);
  if (o.sliced) throw WorldError("'" + o.id + "' is already sliced");
  std::string half = "half__" + o.synset;
  bool derived = kb.contains(half);
  auto ids = split_object(world, target, derived ? half : o.synset, !derived, false);
  world.object(target).sliced = true;
  return ids;
}

std::vector<std::string> break_object(WorldState& world, const KnowledgeBase& kb, std::string_view target) {
  (void)kb;
  ObjectState& o = world.object(target);
  if (o.broken) throw WorldError("'" + o.id + "' is already broken");
  auto ids = split_object(world, target, o.synset, false, true);
  world.object(target).broken = true;
  return ids;
}

ContactOutcome apply_contact_event(WorldState& world, const KnowledgeBase& kb, std::string_view tool,
                                   std::string_view target, double force) {
  const ObjectState& t = world.object(tool);
  const ObjectState& g = world.object(target);
  if (!t.real || !g.real) throw WorldError("contact events need real objects");
  ContactOutcome out;
  auto has = [&](const ObjectState& o, Property p) { return kb.contains(o.synset) && kb.has_property(o.synset, p); };

  if (has(g, Property::Toggleable) && g.toggle_point) {
    Vec3 point = g.position + rotate_yaw(*g.toggle_point, g.yaw);
    if (point_box_distance(point, t.box()) <= world.config.contact_epsilon) {
      world.object(target).toggled_on = !g.toggled_on;
      out.toggled = true;
    }
  }
  const ObjectState& victim = world.object(target);
  if (has(t, Property::SlicingTool) && has(victim, Property::Sliceable) && !victim.sliced &&
      force >= kb.parameters(victim.synset).slice_force) {
    out.created = slice_object(world, kb, target);
    out.sliced = true;
  } else if (has(victim, Property::Breakable) && !victim.broken && force >= kb.parameters(victim.synset).break_force) {
    out.created = break_object(world, kb, target);
    out.broken = true;
  }
  return out;
}

}  // namespace bddl
