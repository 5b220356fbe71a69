#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "bddl/predicates.hpp"

namespace bddl {

namespace {

using P = Predicate;

struct Region {
  double xmin, ymin, xmax, ymax;
  double z;  // center height of the placed subject
};

const ObjectState& require_object(const WorldState& world, const std::string& id) {
  const ObjectState* o = world.find(id);
  if (!o) throw PredicateError("unknown object '" + id + "'");
  return *o;
}

SampleResult failed(std::string message, int attempts = 0) { return {false, attempts, std::move(message)}; }

// Objects whose box encloses the reference (a fridge around a shelf) are not
// obstacles for placements relative to that reference.
std::set<std::string> enclosing(const WorldState& world, const ObjectState& ref) {
  std::set<std::string> out;
  Aabb rb = ref.box();
  for (const auto& [id, o] : world.objects)
    if (id != ref.id && o.spatial() && o.box().contains(rb)) out.insert(id);
  return out;
}

bool collision_free(const WorldState& world, const ObjectState& subject, const Aabb& candidate,
                    const std::set<std::string>& ignore) {
  for (const auto& [id, o] : world.objects) {
    if (id == subject.id || !o.spatial() || ignore.count(id)) continue;
    if (world.agent.held && *world.agent.held == id) continue;
    if (candidate.overlaps(o.box())) return false;
  }
  return true;
}

std::vector<Rect> floor_rects(const WorldState& world, const ObjectState& floor) {
  Aabb fb = floor.box();
  std::vector<Rect> out;
  for (const auto& room : world.rooms) {
    bool inside = std::all_of(room.rects.begin(), room.rects.end(), [&](const Rect& r) {
      return r.xmin >= fb.min.x && r.xmax <= fb.max.x && r.ymin >= fb.min.y && r.ymax <= fb.max.y;
    });
    if (inside) out.insert(out.end(), room.rects.begin(), room.rects.end());
  }
  if (out.empty()) out.push_back({fb.min.x, fb.min.y, fb.max.x, fb.max.y});
  return out;
}

// Highest floor whose footprint contains (x, y) and whose top is below `z`.
const ObjectState* floor_below(const WorldState& world, double x, double y, double z) {
  const ObjectState* best = nullptr;
  for (const auto& [id, o] : world.objects) {
    if (!o.is_floor || !o.spatial()) continue;
    Aabb b = o.box();
    if (x < b.min.x || x > b.max.x || y < b.min.y || y > b.max.y || b.max.z > z) continue;
    if (!best || b.max.z > best->box().max.z) best = &o;
  }
  return best;
}

// Rejection sampling over candidate regions. The subject moves only when a
// collision-free pose is found that also passes the checker.
SampleResult place_in_regions(WorldState& world, const KnowledgeBase& kb, Predicate p,
                              std::span<const std::string> args, std::vector<Region> regions,
                              const std::set<std::string>& ignore, int budget) {
  ObjectState& subject = world.object(args[0]);
  auto fit = [&](double yaw) {
    Vec3 half = rotated_half_extents(subject.half_extents, yaw);
    std::vector<Region> fitting;
    for (Region r : regions) {
      r.xmin += half.x;
      r.xmax -= half.x;
      r.ymin += half.y;
      r.ymax -= half.y;
      if (r.xmin <= r.xmax && r.ymin <= r.ymax) fitting.push_back(r);
    }
    return fitting;
  };
  // Keep the current heading when possible; otherwise try a quarter turn.
  const double old_yaw = subject.yaw;
  double yaw = old_yaw;
  std::vector<Region> fitting = fit(yaw);
  if (fitting.empty()) {
    yaw = old_yaw + std::numbers::pi / 2;
    fitting = fit(yaw);
  }
  if (fitting.empty()) return failed(subject.id + " does not fit the sampling region");
  const Vec3 half = rotated_half_extents(subject.half_extents, yaw);

  const Vec3 old_position = subject.position;
  const bool old_placed = subject.placed;
  for (int attempt = 1; attempt <= budget; ++attempt) {
    const Region& r = fitting.size() == 1 ? fitting[0] : fitting[world.rng.index(fitting.size())];
    Vec3 pos{world.rng.uniform(r.xmin, r.xmax), world.rng.uniform(r.ymin, r.ymax), r.z};
    if (!collision_free(world, subject, Aabb::from_center(pos, half), ignore)) continue;
    subject.position = pos;
    subject.yaw = yaw;
    subject.placed = true;
    if (check(world, kb, p, args)) {
      if (world.agent.held && *world.agent.held == subject.id) world.agent.held.reset();
      return {true, attempt, {}};
    }
    subject.position = old_position;
    subject.yaw = old_yaw;
    subject.placed = old_placed;
  }
  return failed("no valid pose for " + std::string(canonical_name(p)) + " after " + std::to_string(budget) +
                    " attempts",
                budget);
}

SampleResult sample_kinematic(WorldState& world, const KnowledgeBase& kb, Predicate p,
                              std::span<const std::string> args, const SampleOptions& opt, int budget) {
  const ObjectState& subject = require_object(world, args[0]);
  const ObjectState& ref = require_object(world, args[1]);
  if (!subject.real || !ref.real) return failed("non-real argument");
  if (subject.id == ref.id) return failed("subject and reference coincide");
  if (!ref.spatial()) return failed(ref.id + " is not placed");
  if (subject.fixed && subject.placed) return failed(subject.id + " is a fixed fixture");
  Vec3 half = rotated_half_extents(subject.half_extents, subject.yaw);
  Aabb rb = ref.box();
  std::set<std::string> ignore = enclosing(world, ref);
  ignore.insert(ref.id);

  switch (p) {
    case P::OnTopOf: {
      std::vector<Region> regions;
      if (ref.is_floor) {
        for (const Rect& r : floor_rects(world, ref)) regions.push_back({r.xmin, r.ymin, r.xmax, r.ymax, rb.max.z + half.z});
      } else {
        regions.push_back({rb.min.x, rb.min.y, rb.max.x, rb.max.y, rb.max.z + half.z});
      }
      return place_in_regions(world, kb, p, args, regions, ignore, budget);
    }
    case P::InsideOf: {
      if (opt.require_access && has_property(kb, ref, Property::Openable) && !ref.joints.empty() && !is_open(ref))
        return failed(ref.id + " is closed");
      Aabb inner = ref.container_box().value_or(rb);
      if (inner.max.z - inner.min.z < 2 * half.z) return failed(subject.id + " does not fit inside " + ref.id);
      return place_in_regions(world, kb, p, args, {{inner.min.x, inner.min.y, inner.max.x, inner.max.y, inner.min.z + half.z}},
                              ignore, budget);
    }
    case P::Under: {
      const ObjectState* floor = floor_below(world, ref.position.x, ref.position.y, rb.min.z);
      if (!floor) return failed("no floor beneath " + ref.id);
      Aabb fb = floor->box();
      double z = fb.max.z + half.z;
      if (z >= rb.min.z) return failed(subject.id + " does not fit under " + ref.id);
      Region r{std::max(rb.min.x, fb.min.x), std::max(rb.min.y, fb.min.y), std::min(rb.max.x, fb.max.x),
               std::min(rb.max.y, fb.max.y), z};
      ignore.insert(floor->id);
      return place_in_regions(world, kb, p, args, {r}, ignore, budget);
    }
    case P::OnFloor: {
      if (!ref.is_floor) return failed(ref.id + " is not a floor");
      std::vector<Region> regions;
      for (const Rect& r : floor_rects(world, ref)) regions.push_back({r.xmin, r.ymin, r.xmax, r.ymax, rb.max.z + half.z});
      return place_in_regions(world, kb, p, args, regions, ignore, budget);
    }
    default: break;
  }
  throw PredicateError("no kinematic sampler for " + std::string(canonical_name(p)));
}

SampleResult sample_connected(WorldState& world, const KnowledgeBase& kb, std::span<const std::string> args,
                              bool desired, const SampleOptions& opt, int budget) {
  ObjectState& a = world.object(args[0]);
  ObjectState& b = world.object(args[1]);
  if (!a.real || !b.real) return failed("non-real argument");
  if (!desired) {
    a.connected_to.erase(b.id);
    b.connected_to.erase(a.id);
    return {true, 1, {}};
  }
  int attempts = 1;
  if (!a.placed) {
    std::string pair[2] = {args[0], args[1]};
    SampleResult r = sample_kinematic(world, kb, P::OnTopOf, pair, opt, budget);
    if (!r) return r;
    attempts = r.attempts;
  }
  world.object(args[0]).connected_to.insert(args[1]);
  world.object(args[1]).connected_to.insert(args[0]);
  return {true, attempts, {}};
}

SampleResult sample_open(WorldState& world, std::span<const std::string> args, bool open) {
  ObjectState& o = world.object(args[0]);
  std::vector<Joint*> relevant;
  for (auto& j : o.joints)
    if (j.relevant) relevant.push_back(&j);
  if (relevant.empty()) {
    if (!open) return {true, 1, {}};
    return failed(o.id + " has no relevant joints");
  }
  if (!open) {
    for (Joint* j : relevant) j->value = j->lower + world.rng.uniform() * (j->open_threshold() - j->lower);
    return {true, 1, {}};
  }
  if (std::any_of(relevant.begin(), relevant.end(), [](Joint* j) { return j->upper <= j->open_threshold(); }))
    return failed(o.id + " has a joint with an empty range");
  // Random non-empty subset of the relevant joints.
  std::vector<bool> chosen(relevant.size(), false);
  chosen[world.rng.index(relevant.size())] = true;
  for (std::size_t i = 0; i < relevant.size(); ++i)
    if (!chosen[i] && world.rng.coin()) chosen[i] = true;
  for (std::size_t i = 0; i < relevant.size(); ++i) {
    if (!chosen[i]) continue;
    Joint& j = *relevant[i];
    j.value = j.upper - world.rng.uniform() * (j.upper - j.open_threshold());
  }
  return {true, 1, {}};
}

SampleResult sample_filled(WorldState& world, const KnowledgeBase& kb, std::span<const std::string> args, bool fill) {
  ObjectState& o = world.object(args[0]);
  std::string s = substance_key(kb, args[1]);
  auto kind = kb.substance_kind(s);
  if (!kind) throw PredicateError(s + " is not a substance");
  auto box = o.container_box();
  if (!fill) {
    auto it = world.substances.find(s);
    if (!box || it == world.substances.end()) return {true, 1, {}};
    std::erase_if(it->second.particles, [&](const Particle& q) { return box->contains(q.position); });
    return {true, 1, {}};
  }
  if (!box) return failed(o.id + " has no container volume");
  if (!o.spatial()) return failed(o.id + " is not placed");
  ParticleSystem& sys = world.system(s, *kind);
  double threshold = parameters_of(kb, o.synset).fill_threshold;
  double volume = box->volume();
  auto have = particles_inside(world, o, s);
  std::size_t target = have;
  while (static_cast<double>(target) * sys.particle_volume / volume < threshold) ++target;
  std::size_t need = target - have;
  if (need == 0) return {true, 1, {}};

  // Stack particles on a regular grid from the bottom of the container.
  Vec3 ext = box->max - box->min;
  double spacing = std::cbrt(sys.particle_volume);
  auto cells = [&](double len) { return std::max<std::size_t>(1, static_cast<std::size_t>(len / spacing)); };
  std::size_t nx = cells(ext.x), ny = cells(ext.y), nz = cells(ext.z);
  std::size_t placed = 0;
  for (std::size_t k = 0; k < nz && placed < need; ++k)
    for (std::size_t j = 0; j < ny && placed < need; ++j)
      for (std::size_t i = 0; i < nx && placed < need; ++i, ++placed)
        sys.particles.push_back({{box->min.x + (i + 0.5) * ext.x / nx, box->min.y + (j + 0.5) * ext.y / ny,
                                  box->min.z + (k + 0.5) * ext.z / nz},
                                 sys.base_temperature});
  for (; placed < need; ++placed)
    sys.particles.push_back({{world.rng.uniform(box->min.x, box->max.x), world.rng.uniform(box->min.y, box->max.y),
                              world.rng.uniform(box->min.z, box->max.z)},
                             sys.base_temperature});
  return {true, 1, {}};
}

SampleResult sample_covered(WorldState& world, const KnowledgeBase& kb, std::span<const std::string> args, bool cover) {
  ObjectState& o = world.object(args[0]);
  std::string s = substance_key(kb, args[1]);
  auto kind = kb.substance_kind(s);
  if (!kind) throw PredicateError(s + " is not a substance");
  double threshold = parameters_of(kb, o.synset).cover_threshold;
  if (*kind == SubstanceKind::VisualSubstance) {
    if (cover) {
      world.system(s, *kind);
      o.covered[s] = std::max(o.covered[s], static_cast<int>(std::ceil(threshold)));
    } else {
      o.covered.erase(s);
    }
    return {true, 1, {}};
  }
  if (!o.spatial()) return failed(o.id + " is not placed");
  Aabb box = o.box();
  double eps = world.config.particle_contact;
  if (!cover) {
    auto it = world.substances.find(s);
    if (it != world.substances.end())
      std::erase_if(it->second.particles, [&](const Particle& q) { return point_box_distance(q.position, box) <= eps; });
    o.covered.erase(s);
    return {true, 1, {}};
  }
  ParticleSystem& sys = world.system(s, *kind);
  double have = static_cast<double>(contacting_particles(world, o, s));
  for (double n = have; n < threshold; n += 1.0)
    sys.particles.push_back({{world.rng.uniform(box.min.x, box.max.x), world.rng.uniform(box.min.y, box.max.y),
                              box.max.z + 0.5 * eps},
                             sys.base_temperature});
  return {true, 1, {}};
}

SampleResult sample_boiled(WorldState& world, const KnowledgeBase& kb, std::span<const std::string> args, bool boiled) {
  std::string s = substance_key(kb, args[0]);
  auto kind = kb.substance_kind(s);
  if (kind != SubstanceKind::Liquid) throw PredicateError("Boiled inapplicable to " + s);
  double b = parameters_of(kb, s).boiling_temperature;
  ParticleSystem& sys = world.system(s, *kind);
  auto draw = [&] { return boiled ? world.rng.uniform(b + 10.0, b + 50.0) : b - 1.0; };
  sys.base_temperature = draw();
  for (auto& q : sys.particles) q.temperature = draw();
  return {true, 1, {}};
}

SampleResult sample_state(WorldState& world, const KnowledgeBase& kb, Predicate p, std::span<const std::string> args,
                          bool desired) {
  ObjectState& o = world.object(args[0]);
  if (!o.real) return failed(o.id + " is not real");
  auto q = parameters_of(kb, o.synset);
  auto hot = [&](double theta) {
    if (desired)
      o.temperature = world.rng.uniform(theta + 10.0, theta + 50.0);
    else
      o.temperature = theta - 1.0;
  };
  switch (p) {
    case P::Cooked:
      if (desired)
        o.max_temperature = std::max(o.max_temperature, q.cook_temperature);
      else
        o.max_temperature = std::min(o.max_temperature, q.cook_temperature - 1.0);
      break;
    case P::Burnt:
      if (desired)
        o.max_temperature = std::max(o.max_temperature, q.burnt_temperature);
      else
        o.max_temperature = std::min(o.max_temperature, q.burnt_temperature - 1.0);
      break;
    case P::OnFire: hot(q.onfire_temperature); break;
    case P::Heated: hot(q.heated_temperature); break;
    case P::Frozen:
      if (desired)
        o.temperature = world.rng.uniform(q.freeze_temperature - 50.0, q.freeze_temperature - 10.0);
      else
        o.temperature = q.freeze_temperature + 1.0;
      break;
    case P::Soaked: {
      std::string s = substance_key(kb, args[1]);
      if (desired)
        o.soaked[s] = std::max(o.soaked[s], static_cast<int>(std::ceil(q.soak_threshold)));
      else
        o.soaked.erase(s);
      break;
    }
    case P::ToggledOn: o.toggled_on = desired; break;
    case P::Sliced:
    case P::Broken: {
      bool is_set = p == P::Sliced ? o.sliced : o.broken;
      if (is_set == desired) break;
      if (!desired) return failed("cannot restore an intact " + o.id);
      try {
        if (p == P::Sliced)
          slice_object(world, kb, o.id);
        else
          break_object(world, kb, o.id);
      } catch (const WorldError& e) {
        return failed(e.what());
      }
      break;
    }
    case P::InSource:
      if (!desired) return failed("InSource cannot be sampled false");
      o.insource = substance_key(kb, args[1]);
      break;
    default: throw PredicateError("no state sampler for " + std::string(canonical_name(p)));
  }
  return {true, 1, {}};
}

}  // namespace

SampleResult sample(WorldState& world, const KnowledgeBase& kb, Predicate p, std::span<const std::string> args,
                    bool desired, const SampleOptions& options) {
  const auto& spec = spec_of(p);
  if (spec.arity >= 0 && args.size() != static_cast<std::size_t>(spec.arity))
    throw PredicateError(std::string(spec.canonical) + ": wrong number of arguments");
  if (!sampleable(p, desired))
    throw PredicateError(std::string(spec.canonical) + " cannot be sampled " + (desired ? "true" : "false"));
  if (p != P::Boiled) {
    const ObjectState& a = require_object(world, args[0]);
    if (spec.requires_property && kb.contains(a.synset) && !kb.has_property(a.synset, *spec.requires_property))
      throw PredicateError(std::string(spec.canonical) + " inapplicable to " + a.synset);
  }
  int budget = options.attempts.value_or(world.config.sample_attempts);

  SampleResult result;
  switch (p) {
    case P::InsideOf:
    case P::OnTopOf:
    case P::Under:
    case P::OnFloor: result = sample_kinematic(world, kb, p, args, options, budget); break;
    case P::ConnectedWith: result = sample_connected(world, kb, args, desired, options, budget); break;
    case P::Open: result = sample_open(world, args, desired); break;
    case P::Closed: result = sample_open(world, args, !desired); break;
    case P::Filled: result = sample_filled(world, kb, args, desired); break;
    case P::Empty: result = sample_filled(world, kb, args, !desired); break;
    case P::Covered: result = sample_covered(world, kb, args, desired); break;
    case P::Boiled: result = sample_boiled(world, kb, args, desired); break;
    default: result = sample_state(world, kb, p, args, desired); break;
  }
  return result;
}

}  // namespace bddl
