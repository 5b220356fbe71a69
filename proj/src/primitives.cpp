#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "bddl/engine.hpp"
#include "bddl/predicates.hpp"
#include "bddl/simulation.hpp"
#include "bddl/transitions.hpp"

namespace bddl {

namespace {

using P = Predicate;

constexpr double kHoldGap = 0.01;  // m between the agent's top and a held object

PrimitiveOutcome fail(std::string message) { return {false, std::move(message), 0.0, 0.0}; }

// Sixteen bearings; multiples of 90 degrees use exact unit vectors.
std::array<Vec3, 16> bearings() {
  std::array<Vec3, 16> out{};
  for (int k = 0; k < 16; ++k) {
    double a = k * std::numbers::pi / 8.0;
    switch (k) {
      case 0: out[k] = {1, 0, 0}; break;
      case 4: out[k] = {0, 1, 0}; break;
      case 8: out[k] = {-1, 0, 0}; break;
      case 12: out[k] = {0, -1, 0}; break;
      default: out[k] = {std::cos(a), std::sin(a), 0};
    }
  }
  return out;
}

void carry_held(WorldState& world) {
  if (!world.agent.held) return;
  ObjectState* held = world.find(*world.agent.held);
  if (!held) {
    world.agent.held.reset();
    return;
  }
  const ObjectState& agent = world.agent_object();
  held->position = {agent.position.x, agent.position.y,
                    agent.box().max.z + kHoldGap + rotated_half_extents(held->half_extents, held->yaw).z};
  held->placed = true;
}

std::string resolve(const Grounding& grounding, const std::string& target) {
  auto it = grounding.instances.find(target);
  return it == grounding.instances.end() ? target : it->second;
}

bool reachable(const WorldState& world, const KnowledgeBase& kb, const std::string& id) {
  std::string args[1] = {id};
  return check(world, kb, P::InReachOfAgent, args);
}

PrimitiveOutcome navigate(WorldState& world, const ObjectState& target) {
  if (world.agent.held && *world.agent.held == target.id) return fail("target is held");
  ObjectState& agent = world.agent_object();
  Aabb foot = target.box();
  Vec3 center = foot.center();
  Vec3 fh = foot.half_extents();
  Vec3 ah = rotated_half_extents(agent.half_extents, agent.yaw);
  double best = std::numeric_limits<double>::infinity();
  Vec3 best_pos;
  for (const Vec3& d : bearings()) {
    double reach = std::abs(d.x) * fh.x + std::abs(d.y) * fh.y;
    double body = std::abs(d.x) * ah.x + std::abs(d.y) * ah.y;
    double t = reach + world.config.standoff + body;
    Vec3 pos{center.x + d.x * t, center.y + d.y * t, agent.position.z};
    if (!world.room_at(pos.x, pos.y)) continue;
    Aabb candidate = Aabb::from_center(pos, ah);
    bool blocked = false;
    for (const auto& [id, o] : world.objects) {
      if (id == agent.id || !o.spatial() || o.is_floor) continue;
      if (world.agent.held && *world.agent.held == id) continue;
      if (candidate.overlaps(o.box())) {
        blocked = true;
        break;
      }
    }
    if (blocked) continue;
    double cost = horizontal_distance(agent.position, pos);
    if (cost < best) {
      best = cost;
      best_pos = pos;
    }
  }
  if (!std::isfinite(best)) return fail("no collision-free standing point near " + target.id);
  agent.position = best_pos;
  world.agent.heading = std::atan2(center.y - best_pos.y, center.x - best_pos.x);
  carry_held(world);
  return {true, {}, best, best / world.config.base_speed};
}

PrimitiveOutcome pick(WorldState& world, const KnowledgeBase& kb, const ObjectState& target) {
  if (world.agent.held) return fail("hand occupied");
  if (target.id == kAgentId || target.fixed || target.is_floor) return fail(target.id + " cannot be picked");
  if (!target.placed) return fail(target.id + " is not placed");
  std::string args[1] = {target.id};
  if (!check(world, kb, P::InReachOfAgent, args)) return fail(target.id + " is out of reach");
  if (!check(world, kb, P::InFoVOfAgent, args)) return fail(target.id + " is outside the field of view");
  for (auto& [id, o] : world.objects) o.connected_to.erase(target.id);
  world.object(target.id).connected_to.clear();
  world.agent.held = target.id;
  carry_held(world);
  return {true, {}, 0.0, world.config.manipulation_duration};
}

PrimitiveOutcome place(WorldState& world, const KnowledgeBase& kb, const ObjectState& reference,
                       std::optional<P> relation) {
  if (!world.agent.held) return fail("hand empty");
  if (!relation || (*relation != P::OnTopOf && *relation != P::InsideOf))
    return fail("place needs relation OnTopOf or InsideOf");
  if (!reference.spatial()) return fail(reference.id + " is not placed");
  if (!reachable(world, kb, reference.id)) return fail(reference.id + " is out of reach");
  std::string held = *world.agent.held;
  std::string args[2] = {held, reference.id};
  SampleOptions opt;
  opt.require_access = true;
  SampleResult r = sample(world, kb, *relation, args, true, opt);
  if (!r) return fail("cannot place " + held + ": " + r.message);
  world.agent.held.reset();
  return {true, {}, 0.0, world.config.manipulation_duration};
}

PrimitiveOutcome push(WorldState& world, const KnowledgeBase& kb, const ObjectState& target, bool open) {
  if (!reachable(world, kb, target.id)) return fail(target.id + " is out of reach");
  ObjectState& o = world.object(target.id);
  auto joint = std::find_if(o.joints.begin(), o.joints.end(), [](const Joint& j) { return j.relevant; });
  if (joint == o.joints.end()) return fail(target.id + " has no articulated joint");
  joint->value = open ? joint->upper : joint->lower;
  return {true, {}, 0.0, world.config.manipulation_duration};
}

PrimitiveOutcome dip(WorldState& world, const KnowledgeBase& kb, const ObjectState& reference) {
  if (!world.agent.held) return fail("hand empty");
  const ObjectState& held = world.object(*world.agent.held);
  if (!has_property(kb, held, Property::ParticleRemover)) return fail(held.id + " cannot soak up liquid");
  if (!reachable(world, kb, reference.id)) return fail(reference.id + " is out of reach");
  if (!has_property(kb, reference, Property::Fillable)) return fail(reference.id + " is not a container");
  std::string liquid;
  for (const auto& [key, sys] : world.substances) {
    if (sys.kind != SubstanceKind::Liquid) continue;
    std::string args[2] = {reference.id, key};
    if (check(world, kb, P::Filled, args)) {
      liquid = key;
      break;
    }
  }
  if (liquid.empty()) return fail(reference.id + " is not filled with a liquid");
  std::string args[2] = {held.id, liquid};
  SampleResult r = sample(world, kb, P::Soaked, args, true);
  if (!r) return fail(r.message);
  return {true, {}, 0.0, world.config.manipulation_duration};
}

PrimitiveOutcome wipe(WorldState& world, const KnowledgeBase& kb, const ObjectState& target) {
  if (!world.agent.held) return fail("hand empty");
  const std::string held = *world.agent.held;
  if (!has_property(kb, world.object(held), Property::ParticleRemover)) return fail(held + " is not a particleRemover");
  if (!target.spatial()) return fail(target.id + " is not placed");
  if (!reachable(world, kb, target.id)) return fail(target.id + " is out of reach");
  Aabb top = target.box();
  apply_cleaning(world, kb, held, target.id, top);
  return {true, {}, 0.0, world.config.manipulation_duration};
}

void advance(WorldState& world, const KnowledgeBase& kb, double duration, double dt) {
  if (duration <= 0.0) return;
  auto whole_steps = static_cast<long>(std::floor(duration / dt + 1e-9));
  for (long i = 0; i < whole_steps; ++i) {
    step(world, kb, dt);
    carry_held(world);
  }
  double rest = duration - static_cast<double>(whole_steps) * dt;
  if (rest > 1e-9) {
    step(world, kb, rest);
    carry_held(world);
  }
}

}  // namespace

std::string_view primitive_name(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::Navigate: return "navigate";
    case PrimitiveKind::Pick: return "pick";
    case PrimitiveKind::Place: return "place";
    case PrimitiveKind::Push: return "push";
    case PrimitiveKind::Dip: return "dip";
    case PrimitiveKind::Wipe: return "wipe";
  }
  return "navigate";
}

std::optional<PrimitiveKind> parse_primitive_kind(std::string_view name) {
  for (auto k : {PrimitiveKind::Navigate, PrimitiveKind::Pick, PrimitiveKind::Place, PrimitiveKind::Push,
                 PrimitiveKind::Dip, PrimitiveKind::Wipe})
    if (primitive_name(k) == name) return k;
  return std::nullopt;
}

PrimitiveOutcome execute_primitive(WorldState& world, const KnowledgeBase& kb, const Grounding& grounding,
                                   const Primitive& primitive, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!world.has_object(kAgentId)) return fail("world has no agent");
  const std::string id = resolve(grounding, primitive.target);
  const ObjectState* target = world.find(id);
  if (!target) return fail("unknown target '" + primitive.target + "'");
  if (!target->real) return fail(id + " is not real");

  PrimitiveOutcome out;
  try {
    switch (primitive.kind) {
      case PrimitiveKind::Navigate: out = navigate(world, *target); break;
      case PrimitiveKind::Pick: out = pick(world, kb, *target); break;
      case PrimitiveKind::Place: out = place(world, kb, *target, primitive.relation); break;
      case PrimitiveKind::Push: out = push(world, kb, *target, primitive.open); break;
      case PrimitiveKind::Dip: out = dip(world, kb, *target); break;
      case PrimitiveKind::Wipe: out = wipe(world, kb, *target); break;
    }
  } catch (const PredicateError& e) {
    return fail(e.what());
  } catch (const TransitionError& e) {
    return fail(e.what());
  }
  if (out.ok) advance(world, kb, out.duration, dt);
  return out;
}

}  // namespace bddl
