#include "bddl/predicates.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace bddl {

namespace {

using P = Predicate;

// Kinematic relations sample only True; state predicates sample both
// polarities; agent and meta predicates are check-only.
const std::array<PredicateInfo, 35> kRegistry{{
    {P::InsideOf, true, true, false},       {P::OnTopOf, true, true, false},
    {P::NextTo, true, false, false},        {P::InContactWith, true, false, false},
    {P::ConnectedWith, true, true, true},   {P::Under, true, true, false},
    {P::OnFloor, true, true, false},        {P::Open, true, true, true},
    {P::Closed, true, true, true},          {P::Cooked, true, true, true},
    {P::Burnt, true, true, true},           {P::OnFire, true, true, true},
    {P::Frozen, true, true, true},          {P::Heated, true, true, true},
    {P::Boiled, true, true, true},          {P::Soaked, true, true, true},
    {P::Filled, true, true, true},          {P::Empty, true, true, true},
    {P::Covered, true, true, true},         {P::ToggledOn, true, true, true},
    {P::Sliced, true, true, true},          {P::Broken, true, true, true},
    {P::Folded, true, false, false},        {P::Unfolded, true, false, false},
    {P::Assembled, true, false, false},     {P::Hung, true, false, false},
    {P::Blended, true, false, false},       {P::InFoVOfAgent, true, false, false},
    {P::InHandOfAgent, true, false, false}, {P::InReachOfAgent, true, false, false},
    {P::InSameRoomAsAgent, true, false, false}, {P::Real, true, false, false},
    {P::Future, true, false, false},        {P::InSource, true, true, false},
    {P::InRoom, true, false, false},
}};

const ObjectState& object_arg(const WorldState& world, const std::string& id) {
  const ObjectState* o = world.find(id);
  if (!o) throw PredicateError("unknown object '" + id + "'");
  return *o;
}

bool xy_inside(Vec3 c, const Aabb& b) { return c.x >= b.min.x && c.x <= b.max.x && c.y >= b.min.y && c.y <= b.max.y; }

bool inside_of(const ObjectState& a, const ObjectState& b) { return b.box().contains(a.position); }

bool on_top_of(const WorldState& w, const ObjectState& a, const ObjectState& b) {
  Aabb bb = b.box();
  return xy_inside(a.position, bb) && bb.max.z < a.position.z && in_contact(w, a, b);
}

bool under(const ObjectState& a, const ObjectState& b) {
  Aabb bb = b.box();
  return xy_inside(a.position, bb) && bb.min.z > a.position.z;
}

bool next_to(const WorldState& w, const ObjectState& a, const ObjectState& b) {
  bool horizontal = false;
  for (const Vec3& d : horizontal_directions())
    if (ray_box_distance(a.position, d, b.box()) >= 0.0) {
      horizontal = true;
      break;
    }
  if (!horizontal) return false;
  Aabb ba = a.box(), bb = b.box();
  double threshold = w.config.next_to_factor * 0.5 * (ba.diagonal() + bb.diagonal());
  return box_distance(ba, bb) < threshold;
}

bool connected(const ObjectState& a, const ObjectState& b) {
  return a.connected_to.count(b.id) || b.connected_to.count(a.id);
}

const ObjectState& agent_of(const WorldState& w) {
  const ObjectState* a = w.find(kAgentId);
  if (!a) throw PredicateError("world has no agent");
  return *a;
}

}  // namespace

std::span<const PredicateInfo> predicate_registry() { return kRegistry; }

const PredicateInfo& registry_entry(Predicate p) { return kRegistry[static_cast<std::size_t>(p)]; }

bool sampleable(Predicate p, bool desired) {
  const auto& e = registry_entry(p);
  return desired ? e.sample_true : e.sample_false;
}

std::string substance_key(const KnowledgeBase& kb, const std::string& arg) {
  if (kb.contains(arg)) return arg;
  if (auto syn = synset_of_instance(arg)) return *syn;
  return arg;
}

PropertyParameters parameters_of(const KnowledgeBase& kb, const std::string& synset) {
  if (!kb.contains(synset)) {
    PropertyParameters p{};
    const Defaults& d = kb.defaults();
    p = {d.cook_temperature,    d.burnt_temperature,   d.heat_source_temperature, d.cold_source_temperature,
         d.fire_source_temperature, d.onfire_temperature, d.freeze_temperature,   d.heated_temperature,
         d.boiling_temperature, d.slice_force,         d.break_force,             d.soak_threshold,
         d.fill_threshold,      d.cover_threshold,     d.reach_distance};
    return p;
  }
  if (kb.is_leaf(synset)) return kb.parameters(synset);
  return kb.parameters(kb.descendant_leaves(synset).front());
}

bool has_property(const KnowledgeBase& kb, const ObjectState& o, Property p) {
  return kb.contains(o.synset) && kb.has_property(o.synset, p);
}

std::size_t particles_inside(const WorldState& world, const ObjectState& container, const std::string& substance) {
  auto box = container.container_box();
  auto it = world.substances.find(substance);
  if (!box || it == world.substances.end() || !container.spatial()) return 0;
  return static_cast<std::size_t>(std::count_if(it->second.particles.begin(), it->second.particles.end(),
                                                [&](const Particle& p) { return box->contains(p.position); }));
}

double fill_fraction(const WorldState& world, const ObjectState& container, const std::string& substance) {
  auto box = container.container_box();
  auto it = world.substances.find(substance);
  if (!box || it == world.substances.end()) return 0.0;
  double volume = box->volume();
  if (volume <= 0.0) return 0.0;
  return static_cast<double>(particles_inside(world, container, substance)) * it->second.particle_volume / volume;
}

std::size_t contacting_particles(const WorldState& world, const ObjectState& o, const std::string& substance) {
  auto it = world.substances.find(substance);
  if (it == world.substances.end() || !o.spatial()) return 0;
  Aabb box = o.box();
  double eps = world.config.particle_contact;
  return static_cast<std::size_t>(std::count_if(it->second.particles.begin(), it->second.particles.end(),
                                                [&](const Particle& p) { return point_box_distance(p.position, box) <= eps; }));
}

bool is_open(const ObjectState& o) {
  return std::any_of(o.joints.begin(), o.joints.end(),
                     [](const Joint& j) { return j.relevant && j.value > j.open_threshold(); });
}

double max_keypoint_distance(const ObjectState& o) {
  double best = 0.0;
  for (std::size_t i = 0; i < o.cloth_keypoints.size(); ++i)
    for (std::size_t j = i + 1; j < o.cloth_keypoints.size(); ++j)
      best = std::max(best, (o.cloth_keypoints[i] - o.cloth_keypoints[j]).norm());
  return best;
}

bool check(const WorldState& world, const KnowledgeBase& kb, Predicate p, std::span<const std::string> args) {
  const auto& spec = spec_of(p);
  if ((spec.arity >= 0 && args.size() != static_cast<std::size_t>(spec.arity)) || (spec.arity < 0 && args.size() < 2))
    throw PredicateError(std::string(spec.canonical) + ": wrong number of arguments");

  // Substance-only predicates.
  if (p == P::Boiled) {
    std::string s = substance_key(kb, args[0]);
    double threshold = parameters_of(kb, s).boiling_temperature;
    auto it = world.substances.find(s);
    if (it == world.substances.end()) return false;
    const auto& parts = it->second.particles;
    if (parts.empty()) return it->second.base_temperature >= threshold;
    return std::all_of(parts.begin(), parts.end(), [&](const Particle& q) { return q.temperature >= threshold; });
  }

  const ObjectState* first = world.find(args[0]);
  if (!first) {
    // Substance instances are real as soon as they are declared.
    if ((p == P::Real || p == P::Future) && kb.is_substance(substance_key(kb, args[0])))
      return p == P::Real;
    throw PredicateError("unknown object '" + args[0] + "'");
  }
  const ObjectState& a = *first;
  if (spec.requires_property && kb.contains(a.synset) && !kb.has_property(a.synset, *spec.requires_property))
    throw PredicateError(std::string(spec.canonical) + " inapplicable to " + a.synset);

  switch (p) {
    case P::Real: return a.real;
    case P::Future: return !a.real;
    case P::Sliced: return a.sliced;
    case P::Broken: return a.broken;
    default: break;
  }
  if (!a.real) return false;

  const auto params = [&]() { return parameters_of(kb, a.synset); };
  switch (p) {
    case P::InsideOf:
    case P::OnTopOf:
    case P::NextTo:
    case P::InContactWith:
    case P::Under:
    case P::OnFloor: {
      const ObjectState& b = object_arg(world, args[1]);
      if (!a.spatial() || !b.spatial() || a.id == b.id) return false;
      if (p == P::InsideOf) return inside_of(a, b);
      if (p == P::OnTopOf) return on_top_of(world, a, b);
      if (p == P::NextTo) return next_to(world, a, b);
      if (p == P::InContactWith) return in_contact(world, a, b);
      if (p == P::Under) return under(a, b);
      if (!b.is_floor) return false;
      return in_contact(world, a, b) && b.box().contains(Vec3{a.position.x, a.position.y, b.box().max.z});
    }
    case P::ConnectedWith:
    case P::Hung: {
      const ObjectState& b = object_arg(world, args[1]);
      return b.real && connected(a, b);
    }
    case P::Open: return is_open(a);
    case P::Closed: return !is_open(a);
    case P::Cooked: {
      auto q = params();
      return q.cook_temperature <= a.max_temperature && a.max_temperature < q.burnt_temperature;
    }
    case P::Burnt: return a.max_temperature >= params().burnt_temperature;
    case P::OnFire: return a.temperature >= params().onfire_temperature;
    case P::Frozen: return a.temperature <= params().freeze_temperature;
    case P::Heated: return a.temperature >= params().heated_temperature;
    case P::Soaked: {
      auto it = a.soaked.find(substance_key(kb, args[1]));
      return it != a.soaked.end() && it->second >= params().soak_threshold;
    }
    case P::Filled: return fill_fraction(world, a, substance_key(kb, args[1])) >= params().fill_threshold;
    case P::Empty: return particles_inside(world, a, substance_key(kb, args[1])) == 0;
    case P::Covered: {
      std::string s = substance_key(kb, args[1]);
      double threshold = params().cover_threshold;
      auto kind = kb.substance_kind(s);
      if (kind == SubstanceKind::VisualSubstance) {
        auto it = a.covered.find(s);
        return it != a.covered.end() && it->second >= threshold;
      }
      return static_cast<double>(contacting_particles(world, a, s)) >= threshold;
    }
    case P::ToggledOn: return a.toggled_on;
    case P::Folded:
    case P::Unfolded: {
      const auto& t = p == P::Folded ? a.fold_threshold : a.unfold_threshold;
      if (!t || a.cloth_keypoints.size() < 2)
        throw PredicateError(a.id + " has no cloth keypoints or " +
                             (p == P::Folded ? "fold" : "unfold") + " threshold configured");
      double d = max_keypoint_distance(a);
      return p == P::Folded ? d < *t : d > *t;
    }
    case P::Assembled: {
      if (a.assembly_pairs.empty()) return false;
      for (const auto& [x, y] : a.assembly_pairs) {
        const ObjectState* ox = world.find(x);
        const ObjectState* oy = world.find(y);
        if (!ox || !oy || !ox->real || !oy->real || !connected(*ox, *oy)) return false;
      }
      return true;
    }
    case P::Blended: {
      std::vector<const ObjectState*> objs;
      for (const auto& id : args) objs.push_back(&object_arg(world, id));
      for (std::size_t i = 0; i < objs.size(); ++i)
        for (std::size_t j = i + 1; j < objs.size(); ++j)
          if (!in_contact(world, *objs[i], *objs[j])) return false;
      return true;
    }
    case P::InHandOfAgent: return world.agent.held == a.id;
    case P::InReachOfAgent: {
      if (world.agent.held == a.id) return true;
      if (!a.spatial()) return false;
      return horizontal_distance(agent_of(world).position, a.position) <= world.agent.reach;
    }
    case P::InFoVOfAgent: {
      if (world.agent.held == a.id) return true;
      if (!a.spatial()) return false;
      Vec3 from = agent_of(world).position;
      double dx = a.position.x - from.x, dy = a.position.y - from.y;
      double d = std::hypot(dx, dy);
      if (d == 0.0) return true;
      if (d > world.config.fov_range) return false;
      double c = (dx * std::cos(world.agent.heading) + dy * std::sin(world.agent.heading)) / d;
      return c >= std::cos(world.config.fov_half_angle) - 1e-12;
    }
    case P::InSameRoomAsAgent: {
      if (!a.spatial()) return false;
      Vec3 from = agent_of(world).position;
      const Room* ra = world.room_at(from.x, from.y);
      const Room* ro = world.room_at(a.position.x, a.position.y);
      return ra && ra == ro;
    }
    case P::InSource: return a.insource == substance_key(kb, args[1]);
    case P::InRoom: {
      if (!a.spatial()) return false;
      const Room* r = world.room_at(a.position.x, a.position.y);
      return r && r->type == args[1];
    }
    default: break;
  }
  throw PredicateError("no checker for " + std::string(spec.canonical));
}

bool check(const WorldState& world, const KnowledgeBase& kb, const GroundLiteral& literal) {
  return check(world, kb, literal.predicate, literal.args) == literal.positive;
}

}  // namespace bddl
