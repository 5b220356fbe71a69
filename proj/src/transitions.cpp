#include "bddl/transitions.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bddl/predicates.hpp"

namespace bddl {

namespace {

const TransitionRule* find_rule(const KnowledgeBase& kb, const std::string& id) {
  for (const auto& r : kb.transition_rules())
    if (r.id == id) return &r;
  return nullptr;
}

Aabb interior_box(const ObjectState& machine) { return machine.container_box().value_or(machine.box()); }

bool contains_object(const WorldState& world, const ObjectState& machine, const ObjectState& o, bool containment) {
  if (!o.spatial() || o.id == machine.id) return false;
  if (world.agent.held && *world.agent.held == o.id) return false;
  if (interior_box(machine).contains(o.position)) return true;
  return !containment && in_contact(world, machine, o);
}

bool substance_present(const WorldState& world, const KnowledgeBase& kb, const ObjectState& machine,
                       const std::string& synset) {
  Aabb box = interior_box(machine);
  for (const auto& [key, sys] : world.substances) {
    if (!kb.is_a(key, synset)) continue;
    for (const auto& p : sys.particles)
      if (box.contains(p.position)) return true;
  }
  return false;
}

bool trigger_holds(const WorldState& world, const KnowledgeBase& kb, const TransitionRule& rule,
                   const ObjectState& machine, TriggerSnapshot* snap) {
  double t = interior_temperature(world, kb, machine);
  if (snap) *snap = {machine.toggled_on, t, rule.machine.requires_containment};
  if (!machine.spatial() || !kb.is_a(machine.synset, rule.machine.synset)) return false;
  if (rule.machine.requires_toggled_on && !machine.toggled_on) return false;
  if (rule.machine.min_temperature && t < *rule.machine.min_temperature) return false;
  return true;
}

bool has_substance_inputs(const KnowledgeBase& kb, const TransitionRule& rule) {
  return std::any_of(rule.inputs.begin(), rule.inputs.end(), [&](const RuleInput& in) { return kb.is_substance(in.synset); });
}

// One greedy binding from the objects not in `used`; nullopt when incomplete.
std::optional<RuleInstance> bind_once(const WorldState& world, const KnowledgeBase& kb, const TransitionRule& rule,
                                      const ObjectState& machine, std::set<std::string>& used) {
  RuleInstance inst;
  inst.rule_id = rule.id;
  inst.machine = machine.id;
  std::set<std::string> taken;
  for (const auto& in : rule.inputs) {
    if (kb.is_substance(in.synset)) {
      if (!substance_present(world, kb, machine, in.synset)) return std::nullopt;
      inst.substances.push_back(in.synset);
      continue;
    }
    int need = in.count;
    for (const auto& [id, o] : world.objects) {
      if (need == 0) break;
      if (used.count(id) || taken.count(id) || !kb.is_a(o.synset, in.synset)) continue;
      if (!contains_object(world, machine, o, rule.machine.requires_containment)) continue;
      inst.objects.push_back(id);
      taken.insert(id);
      --need;
    }
    if (need > 0) return std::nullopt;
  }
  used.insert(taken.begin(), taken.end());
  return inst;
}

std::string output_leaf(const KnowledgeBase& kb, const std::string& synset) {
  return kb.is_leaf(synset) ? synset : kb.descendant_leaves(synset).front();
}

void remove_object(WorldState& world, const std::string& id) {
  for (auto& [other_id, o] : world.objects) o.connected_to.erase(id);
  if (world.agent.held && *world.agent.held == id) world.agent.held.reset();
  world.objects.erase(id);
}

}  // namespace

double interior_temperature(const WorldState& world, const KnowledgeBase& kb, const ObjectState& machine) {
  (void)world;
  if (has_property(kb, machine, Property::HeatSource)) {
    bool active = !has_property(kb, machine, Property::Toggleable) || machine.toggled_on;
    if (active) return parameters_of(kb, machine.synset).heat_source_temperature;
  }
  return machine.temperature;
}

std::vector<RuleInstance> match_rules(const WorldState& world, const KnowledgeBase& kb) {
  std::vector<RuleInstance> out;
  for (const auto& rule : kb.transition_rules()) {
    bool single = has_substance_inputs(kb, rule);
    for (const auto& [id, machine] : world.objects) {
      TriggerSnapshot snap;
      if (!trigger_holds(world, kb, rule, machine, &snap)) continue;
      std::set<std::string> used;
      while (auto inst = bind_once(world, kb, rule, machine, used)) {
        inst->trigger = snap;
        out.push_back(std::move(*inst));
        if (single) break;
      }
    }
  }
  return out;
}

RuleApplication apply_rule(WorldState& world, const KnowledgeBase& kb, const RuleInstance& instance) {
  const TransitionRule* rule = find_rule(kb, instance.rule_id);
  if (!rule) throw TransitionError("unknown rule '" + instance.rule_id + "'");
  auto stale = [&](const std::string& why) {
    return TransitionError("stale instance of " + rule->id + " in " + instance.machine + ": " + why);
  };
  const ObjectState* machine = world.find(instance.machine);
  if (!machine || !trigger_holds(world, kb, *rule, *machine, nullptr)) throw stale("trigger no longer holds");

  // Re-verify the bound inputs against the rule.
  std::size_t next_object = 0, next_substance = 0;
  std::vector<std::pair<const RuleInput*, std::string>> bound;
  for (const auto& in : rule->inputs) {
    if (kb.is_substance(in.synset)) {
      if (next_substance >= instance.substances.size() || instance.substances[next_substance] != in.synset ||
          !substance_present(world, kb, *machine, in.synset))
        throw stale(in.synset + " missing");
      bound.emplace_back(&in, instance.substances[next_substance++]);
      continue;
    }
    for (int k = 0; k < in.count; ++k) {
      if (next_object >= instance.objects.size()) throw stale("input binding incomplete");
      const std::string& id = instance.objects[next_object++];
      const ObjectState* o = world.find(id);
      if (!o || !o->real || !kb.is_a(o->synset, in.synset) ||
          !contains_object(world, *machine, *o, rule->machine.requires_containment))
        throw stale(id + " no longer available");
      bound.emplace_back(&in, id);
    }
  }

  RuleApplication app;
  app.rule_id = rule->id;
  app.machine = instance.machine;
  const double temperature = interior_temperature(world, kb, *machine);
  const Aabb interior = interior_box(*machine);
  for (const auto& [in, value] : bound) {
    if (!in->consumed) continue;
    if (kb.is_substance(in->synset)) {
      for (auto& [key, sys] : world.substances) {
        if (!kb.is_a(key, in->synset)) continue;
        auto before = sys.particles.size();
        std::erase_if(sys.particles, [&](const Particle& p) { return interior.contains(p.position); });
        app.particles_removed += before - sys.particles.size();
      }
    } else {
      remove_object(world, value);
      app.consumed.push_back(value);
    }
  }

  for (const auto& out : rule->outputs) {
    for (int k = 0; k < out.count; ++k) {
      std::string id;
      for (const auto& [oid, o] : world.objects)
        if (!o.real && o.replaced_by.empty() && !o.sliced && !o.broken && kb.is_a(o.synset, out.synset)) {
          id = oid;
          break;
        }
      if (id.empty()) {
        std::string leaf = output_leaf(kb, out.synset);
        id = world.fresh_id(leaf);
        world.objects.emplace(id, make_default_object(kb, id, leaf, world.config.ambient_temperature));
      }
      ObjectState& o = world.object(id);
      o.real = true;
      o.placed = false;
      std::string args[2] = {id, instance.machine};
      if (!sample(world, kb, Predicate::InsideOf, args, true)) {
        ObjectState& fallback = world.object(id);
        fallback.position = interior.center();
        fallback.placed = true;
      }
      ObjectState& placed = world.object(id);
      placed.temperature = temperature;
      placed.max_temperature = std::max(placed.max_temperature, temperature);
      app.produced.push_back(id);
    }
  }
  return app;
}

std::vector<CleaningEffect> apply_cleaning(WorldState& world, const KnowledgeBase& kb, const std::string& remover,
                                           const std::string& target, std::optional<Aabb> footprint) {
  const ObjectState* r = world.find(remover);
  const ObjectState* t = world.find(target);
  if (!r || !r->real) throw TransitionError("unknown remover '" + remover + "'");
  if (!t || !t->real) throw TransitionError("unknown target '" + target + "'");
  if (!has_property(kb, *r, Property::ParticleRemover))
    throw TransitionError(remover + " lacks property particleRemover");

  const Aabb tb = t->box();
  const double eps = world.config.particle_contact;
  if (!footprint) {
    if (!in_contact(world, *r, *t)) throw TransitionError(remover + " is not in contact with " + target);
    Aabb rb = r->box();
    double c = world.config.contact_epsilon;
    footprint = Aabb{{std::max(tb.min.x, rb.min.x - c), std::max(tb.min.y, rb.min.y - c), tb.min.z - eps},
                     {std::min(tb.max.x, rb.max.x + c), std::min(tb.max.y, rb.max.y + c), tb.max.z + eps}};
  }
  double top_area = (tb.max.x - tb.min.x) * (tb.max.y - tb.min.y);
  double fx = std::max(0.0, std::min(tb.max.x, footprint->max.x) - std::max(tb.min.x, footprint->min.x));
  double fy = std::max(0.0, std::min(tb.max.y, footprint->max.y) - std::max(tb.min.y, footprint->min.y));
  double fraction = top_area > 0.0 ? std::min(1.0, fx * fy / top_area) : 1.0;

  auto allowed = [&](const std::string& substance) {
    const CleaningRule* rule = kb.cleaning_rule_for(substance);
    if (!rule) return true;
    if (!rule->remover_synsets.empty() &&
        std::none_of(rule->remover_synsets.begin(), rule->remover_synsets.end(),
                     [&](const std::string& s) { return kb.is_a(r->synset, s); }))
      return false;
    if (rule->saturation.empty()) return true;
    double threshold = parameters_of(kb, r->synset).soak_threshold;
    for (const auto& [liquid, w] : r->soaked)
      for (const auto& s : rule->saturation)
        if (kb.is_a(liquid, s) && w >= threshold) return true;
    return false;
  };

  std::vector<CleaningEffect> effects;
  std::vector<std::string> visual;
  for (const auto& [s, level] : t->covered)
    if (level > 0) visual.push_back(s);
  for (const auto& s : visual) {
    CleaningEffect e{s, allowed(s), 0};
    if (e.allowed) {
      ObjectState& tt = world.object(target);
      int level = tt.covered[s];
      int removed = std::min(level, static_cast<int>(std::ceil(level * fraction - 1e-9)));
      tt.covered[s] = level - removed;
      if (tt.covered[s] <= 0) tt.covered.erase(s);
      e.removed = static_cast<std::size_t>(removed);
    }
    effects.push_back(e);
  }
  for (auto& [s, sys] : world.substances) {
    if (sys.kind == SubstanceKind::VisualSubstance) continue;
    auto touching = [&](const Particle& p) { return point_box_distance(p.position, tb) <= eps; };
    if (std::none_of(sys.particles.begin(), sys.particles.end(), touching)) continue;
    CleaningEffect e{s, allowed(s), 0};
    if (e.allowed) {
      auto before = sys.particles.size();
      std::erase_if(sys.particles, [&](const Particle& p) {
        return touching(p) && p.position.x >= footprint->min.x && p.position.x <= footprint->max.x &&
               p.position.y >= footprint->min.y && p.position.y <= footprint->max.y;
      });
      e.removed = before - sys.particles.size();
    }
    effects.push_back(e);
  }
  return effects;
}

}  // namespace bddl
