#include "bddl/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bddl/predicates.hpp"

namespace bddl {

namespace {

struct Source {
  Aabb box;
  std::string id;
  double temperature;
  bool heat;  // false: cold source
};

bool active(const KnowledgeBase& kb, const ObjectState& o) {
  return !has_property(kb, o, Property::Toggleable) || o.toggled_on;
}

std::vector<Source> snapshot_sources(const WorldState& world, const KnowledgeBase& kb) {
  std::vector<Source> out;
  for (const auto& [id, o] : world.objects) {
    if (!o.spatial() || !kb.contains(o.synset)) continue;
    auto q = parameters_of(kb, o.synset);
    if (has_property(kb, o, Property::HeatSource) && active(kb, o))
      out.push_back({o.box(), id, q.heat_source_temperature, true});
    if (has_property(kb, o, Property::FireSource) && active(kb, o))
      out.push_back({o.box(), id, q.fire_source_temperature, true});
    if (has_property(kb, o, Property::Flammable) && o.temperature >= q.onfire_temperature)
      out.push_back({o.box(), id, q.onfire_temperature, true});
    if (has_property(kb, o, Property::ColdSource) && active(kb, o))
      out.push_back({o.box(), id, q.cold_source_temperature, false});
  }
  return out;
}

// Hottest influencing heat source, else the coldest cold source.
std::optional<double> source_target(const std::vector<Source>& sources, const std::string& self,
                                    double radius, auto&& distance) {
  double hot = -std::numeric_limits<double>::infinity();
  double cold = std::numeric_limits<double>::infinity();
  for (const auto& s : sources) {
    if (s.id == self || distance(s.box) > radius) continue;
    if (s.heat)
      hot = std::max(hot, s.temperature);
    else
      cold = std::min(cold, s.temperature);
  }
  if (std::isfinite(hot)) return hot;
  if (std::isfinite(cold)) return cold;
  return std::nullopt;
}

double relax(double t, double target, double k, double dt) { return target + (t - target) * std::exp(-k * dt); }

void update_temperatures(WorldState& world, const KnowledgeBase& kb, double dt) {
  const auto sources = snapshot_sources(world, kb);
  const auto& cfg = world.config;
  for (auto& [id, o] : world.objects) {
    if (!o.spatial() || !has_property(kb, o, Property::Heatable)) continue;
    Aabb box = o.box();
    Vec3 center = o.position;
    auto target = source_target(sources, id, cfg.heat_radius, [&](const Aabb& s) {
      return s.contains(center) ? 0.0 : box_distance(box, s);
    });
    double next = target ? relax(o.temperature, *target, cfg.k_heat, dt)
                         : relax(o.temperature, cfg.ambient_temperature, cfg.k_ambient, dt);
    bool burning = has_property(kb, o, Property::Flammable) &&
                   o.temperature >= parameters_of(kb, o.synset).onfire_temperature;
    if (!burning || next > o.temperature) o.temperature = next;
    o.max_temperature = std::max(o.max_temperature, o.temperature);
  }
  for (auto& [key, sys] : world.substances) {
    for (auto& p : sys.particles) {
      auto target = source_target(sources, {}, cfg.heat_radius, [&](const Aabb& s) { return point_box_distance(p.position, s); });
      p.temperature = target ? relax(p.temperature, *target, cfg.k_heat, dt)
                             : relax(p.temperature, cfg.ambient_temperature, cfg.k_ambient, dt);
    }
  }
}

std::size_t whole(double credit) { return static_cast<std::size_t>(std::floor(credit + 1e-9)); }

void soak(WorldState& world, const KnowledgeBase& kb, double dt, StepReport& report) {
  const double eps = world.config.particle_contact;
  for (auto& [id, o] : world.objects) {
    if (!o.spatial() || !has_property(kb, o, Property::ParticleRemover)) continue;
    Aabb box = o.box();
    for (auto& [key, sys] : world.substances) {
      if (sys.kind != SubstanceKind::Liquid) continue;
      auto touching = [&](const Particle& p) { return point_box_distance(p.position, box) <= eps; };
      std::size_t available = static_cast<std::size_t>(std::count_if(sys.particles.begin(), sys.particles.end(), touching));
      if (available == 0) {
        o.absorb_credit.erase(key);
        continue;
      }
      double& credit = o.absorb_credit[key];
      credit += world.config.absorb_rate * dt;
      std::size_t n = std::min(whole(credit), available);
      if (n == 0) continue;
      credit -= static_cast<double>(n);
      std::size_t taken = 0;
      std::erase_if(sys.particles, [&](const Particle& p) {
        if (taken < n && touching(p)) {
          ++taken;
          return true;
        }
        return false;
      });
      o.soaked[key] += static_cast<int>(n);
      report.flows[key].absorbed += n;
    }
  }
}

// Emitted particles fall straight down into the container of the first
// surface hit, or rest on its top face.
Vec3 drop_point(const WorldState& world, Vec3 origin, double particle_size) {
  for (const auto& hit : ray_query(world, origin, {0, 0, -1})) {
    const ObjectState& o = world.object(hit.id);
    if (auto c = o.container_box(); c && origin.x >= c->min.x && origin.x <= c->max.x && origin.y >= c->min.y &&
                                    origin.y <= c->max.y && origin.z >= c->min.z)
      return {origin.x, origin.y, c->min.z + std::min(0.5 * particle_size, 0.5 * (c->max.z - c->min.z))};
    return {origin.x, origin.y, o.box().max.z + 0.5 * world.config.particle_contact};
  }
  return origin;
}

void emit_and_drain(WorldState& world, const KnowledgeBase& kb, double dt, StepReport& report) {
  std::vector<std::string> emitters;
  for (const auto& [id, o] : world.objects)
    if (o.spatial() && o.source_point &&
        (has_property(kb, o, Property::WaterSource) || has_property(kb, o, Property::ParticleSource)) && active(kb, o))
      emitters.push_back(id);
  for (const auto& id : emitters) {
    ObjectState& o = world.object(id);
    o.emit_credit += world.config.emit_rate * dt;
    std::size_t n = whole(o.emit_credit);
    if (n == 0) continue;
    o.emit_credit -= static_cast<double>(n);
    std::string substance = o.insource.value_or("water.n.06");
    auto kind = kb.substance_kind(substance).value_or(SubstanceKind::Liquid);
    Vec3 origin = o.position + *o.source_point;
    ParticleSystem& sys = world.system(substance, kind);
    Vec3 at = drop_point(world, origin, std::cbrt(sys.particle_volume));
    for (std::size_t i = 0; i < n; ++i) sys.particles.push_back({at, sys.base_temperature});
    report.flows[substance].emitted += n;
  }
  for (const auto& [id, o] : world.objects) {
    if (!o.spatial() || !o.sink_point) continue;
    Vec3 drain = o.position + *o.sink_point;
    for (auto& [key, sys] : world.substances) {
      auto before = sys.particles.size();
      std::erase_if(sys.particles, [&](const Particle& p) { return (p.position - drain).norm() <= 0.05; });
      if (before != sys.particles.size()) report.flows[key].sunk += before - sys.particles.size();
    }
  }
}

}  // namespace

StepReport step(WorldState& world, const KnowledgeBase& kb, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step requires dt > 0");
  StepReport report;
  update_temperatures(world, kb, dt);
  soak(world, kb, dt, report);
  emit_and_drain(world, kb, dt, report);
  for (const auto& inst : match_rules(world, kb)) {
    std::map<std::string, std::size_t> before;
    for (const auto& [key, sys] : world.substances) before[key] = sys.particles.size();
    try {
      report.transitions.push_back(apply_rule(world, kb, inst));
    } catch (const TransitionError&) {
      continue;  // lost an input to an earlier rule; re-matched next step
    }
    for (const auto& [key, sys] : world.substances)
      if (before[key] > sys.particles.size()) report.flows[key].consumed += before[key] - sys.particles.size();
  }
  world.clock += dt;
  return report;
}

}  // namespace bddl
