#include <algorithm>
#include <map>
#include <set>

#include "bddl/engine.hpp"
#include "bddl/predicates.hpp"
#include "bddl/validate.hpp"

namespace bddl {

namespace {

using P = Predicate;

bool is_placement(P p) {
  return p == P::InsideOf || p == P::OnTopOf || p == P::Under || p == P::OnFloor || p == P::ConnectedWith;
}

bool is_substance_literal(P p) { return p == P::Filled || p == P::Empty || p == P::Covered || p == P::InSource; }

std::string leaf_for(const KnowledgeBase& kb, const std::string& synset) {
  if (!kb.contains(synset) || kb.is_leaf(synset)) return synset;
  return kb.descendant_leaves(synset).front();
}

const ObjectState* floor_of_room(const WorldState& world, const Room& room) {
  if (const ObjectState* f = world.find("floor_" + room.id); f && f->is_floor) return f;
  for (const auto& [id, o] : world.objects) {
    if (!o.is_floor) continue;
    Vec3 c = o.position;
    if (room.contains(c.x, c.y)) return &o;
  }
  return nullptr;
}

class Instantiator {
 public:
  Instantiator(const ActivityDefinition& def, const WorldState& scene, const KnowledgeBase& kb, std::uint64_t seed,
               const InstantiateOptions& options)
      : def_(def), kb_(kb), options_(options) {
    result_.world = scene;
    result_.world.rng.reseed(seed);
  }

  Instantiation run() {
    for (const auto& lit : def_.init) result_.attempts.push_back({serialize_literal(lit), 0, false});
    declare();
    bind_fixtures();
    create_objects();
    place_agent();
    sample_kinematic();
    for (std::size_t i = 0; i < def_.init.size(); ++i)
      if (is_substance_literal(def_.init[i].predicate)) sample_simple(i);
    for (std::size_t i = 0; i < def_.init.size(); ++i) {
      P p = def_.init[i].predicate;
      if (!is_placement(p) && !is_substance_literal(p) && spec_of(p).category != PredicateClass::Kinematic)
        sample_simple(i);
    }
    for (const auto& lit : def_.init)
      if (!holds(lit))
        throw InstantiationError("init literal " + serialize_literal(lit) + " does not hold after sampling",
                                 serialize_literal(lit));
    return std::move(result_);
  }

 private:
  WorldState& world() { return result_.world; }

  std::vector<std::string> ground(const GroundLiteral& lit) const {
    std::vector<std::string> args;
    for (std::size_t i = 0; i < lit.args.size(); ++i) {
      if (lit.predicate == P::InRoom && i == 1) {
        args.push_back(lit.args[i]);
        continue;
      }
      auto it = result_.grounding.instances.find(lit.args[i]);
      args.push_back(it == result_.grounding.instances.end() ? lit.args[i] : it->second);
    }
    return args;
  }

  bool holds(const GroundLiteral& lit) const {
    auto args = ground(lit);
    try {
      return check(result_.world, kb_, lit.predicate, args) == lit.positive;
    } catch (const PredicateError&) {
      return false;
    }
  }

  bool is_future(const std::string& instance) const {
    return std::any_of(def_.init.begin(), def_.init.end(), [&](const GroundLiteral& l) {
      return l.predicate == P::Future && l.positive && l.args[0] == instance;
    });
  }

  void declare() {
    for (const auto& decl : def_.objects) {
      if (decl.synset == "agent.n.01") {
        result_.grounding.instances[decl.instance] = std::string(kAgentId);
      } else if (auto kind = kb_.substance_kind(decl.synset); kind && def_.dialect() == Dialect::Modern) {
        result_.grounding.instances[decl.instance] = decl.synset;
        world().system(decl.synset, *kind);
      }
    }
  }

  void bind_fixtures() {
    std::set<std::string> taken;
    for (const auto& lit : def_.init) {
      if (lit.predicate != P::InRoom || !lit.positive) continue;
      const std::string& instance = lit.args[0];
      const std::string& room_type = lit.args[1];
      const ObjectDeclaration* decl = def_.find_object(instance);
      if (!decl || result_.grounding.instances.count(instance)) continue;
      std::vector<const Room*> rooms;
      for (const auto& r : world().rooms)
        if (r.type == room_type) rooms.push_back(&r);
      if (rooms.empty())
        throw InstantiationError("scene has no room of type " + room_type, serialize_literal(lit));

      std::vector<std::pair<std::string, std::string>> candidates;  // object, room
      for (const auto& [id, o] : world().objects) {
        if (taken.count(id) || !o.spatial() || id == kAgentId) continue;
        if (!kb_.contains(o.synset) || !kb_.is_a(o.synset, decl->synset)) continue;
        for (const Room* r : rooms) {
          bool inside = o.is_floor ? floor_of_room(world(), *r) == &o : r->contains(o.position.x, o.position.y);
          if (inside) {
            candidates.emplace_back(id, r->id);
            break;
          }
        }
      }
      if (!candidates.empty()) {
        const auto& [id, room] = candidates[world().rng.index(candidates.size())];
        result_.grounding.instances[instance] = id;
        result_.grounding.rooms[instance] = room;
        taken.insert(id);
        continue;
      }
      // No matching fixture: create one on the floor of a room of that type.
      const Room* room = rooms[world().rng.index(rooms.size())];
      const ObjectState* floor = floor_of_room(world(), *room);
      if (!floor) throw InstantiationError("room " + room->id + " has no floor", serialize_literal(lit));
      std::string id = new_object(instance, decl->synset);
      world().object(id).fixed = true;
      std::string args[2] = {id, floor->id};
      SampleResult r = sample(world(), kb_, P::OnFloor, args, true);
      if (!r) throw InstantiationError("cannot place fixture " + instance + " in " + room->id + ": " + r.message,
                                       serialize_literal(lit));
      result_.grounding.rooms[instance] = room->id;
      taken.insert(id);
    }
  }

  std::string new_object(const std::string& instance, const std::string& synset) {
    std::string leaf = leaf_for(kb_, synset);
    std::string id = world().has_object(instance) ? world().fresh_id(leaf) : instance;
    world().objects.emplace(id, make_default_object(kb_, id, leaf, world().config.ambient_temperature));
    result_.grounding.instances[instance] = id;
    return id;
  }

  void create_objects() {
    for (const auto& decl : def_.objects) {
      if (result_.grounding.instances.count(decl.instance)) continue;
      std::string id = new_object(decl.instance, decl.synset);
      if (is_future(decl.instance)) world().object(id).real = false;
    }
  }

  void place_agent() {
    if (world().has_object(kAgentId)) return;
    bool needed = std::any_of(def_.objects.begin(), def_.objects.end(),
                              [](const ObjectDeclaration& d) { return d.synset == "agent.n.01"; });
    if (!needed) return;
    ObjectState agent;
    agent.id = std::string(kAgentId);
    agent.synset = "agent.n.01";
    agent.half_extents = world().config.agent_half_extents;
    agent.placed = false;
    world().objects.emplace(agent.id, agent);
    if (!place_on_some_floor(agent.id)) throw InstantiationError("no free floor space for the agent");
  }

  std::vector<std::string> floors() const {
    std::vector<std::string> out;
    for (const auto& [id, o] : result_.world.objects)
      if (o.is_floor && o.spatial()) out.push_back(id);
    return out;
  }

  bool place_on_some_floor(const std::string& id) {
    auto fl = floors();
    if (fl.empty()) return false;
    std::size_t start = world().rng.index(fl.size());
    for (std::size_t k = 0; k < fl.size(); ++k) {
      std::string args[2] = {id, fl[(start + k) % fl.size()]};
      if (sample(world(), kb_, P::OnFloor, args, true)) return true;
    }
    return false;
  }

  // Kinematic literals ordered so that every reference is placed before its
  // subject; ties keep declaration order.
  std::vector<std::size_t> kinematic_order() const {
    std::vector<std::size_t> lits;
    for (std::size_t i = 0; i < def_.init.size(); ++i)
      if (def_.init[i].positive && is_placement(def_.init[i].predicate)) lits.push_back(i);
    std::vector<std::size_t> order;
    std::set<std::size_t> done;
    while (order.size() < lits.size()) {
      bool progressed = false;
      for (std::size_t i : lits) {
        if (done.count(i)) continue;
        const std::string& ref = def_.init[i].args[1];
        bool blocked = std::any_of(lits.begin(), lits.end(), [&](std::size_t j) {
          return !done.count(j) && j != i && def_.init[j].args[0] == ref;
        });
        if (blocked) continue;
        order.push_back(i);
        done.insert(i);
        progressed = true;
        break;
      }
      if (!progressed) {
        for (std::size_t i : lits)
          if (!done.count(i))
            throw InstantiationError("cyclic placement constraints at " + serialize_literal(def_.init[i]),
                                     serialize_literal(def_.init[i]));
      }
    }
    return order;
  }

  bool is_fixture(const std::string& id) const {
    const ObjectState* o = result_.world.find(id);
    return o && (o->fixed || o->is_floor);
  }

  void place_unconstrained() {
    std::set<std::string> subjects;
    for (const auto& lit : def_.init)
      if (lit.positive && is_placement(lit.predicate)) subjects.insert(lit.args[0]);
    for (const auto& decl : def_.objects) {
      const std::string& id = result_.grounding.instances.at(decl.instance);
      ObjectState* o = world().find(id);
      if (!o || !o->real || o->placed || subjects.count(decl.instance)) continue;
      if (!place_on_some_floor(id))
        throw InstantiationError("no free floor space for " + decl.instance);
    }
  }

  void sample_kinematic() {
    const auto order = kinematic_order();
    const WorldState base = result_.world;
    int restarts = 0;
    for (;;) {
      try {
        place_unconstrained();
        if (run_placements(order)) break;
      } catch (const InstantiationError& e) {
        if (!e.literal().empty() || order.empty()) throw;
        last_message_ = e.what();
      }
      if (++restarts > options_.budget) {
        const std::string& lit = last_failure_;
        throw InstantiationError("could not satisfy " + (lit.empty() ? std::string("placement constraints") : lit) +
                                     " within " + std::to_string(options_.budget) + " restarts" +
                                     (last_message_.empty() ? "" : ": " + last_message_),
                                 lit);
      }
      Rng rng = result_.world.rng;
      result_.world = base;
      result_.world.rng = rng;
    }
    result_.restarts = restarts;
  }

  // Returns false when the local failure limit asks for a full restart.
  bool run_placements(const std::vector<std::size_t>& order) {
    std::vector<WorldState> snapshots;
    int failures = 0;
    std::size_t k = 0;
    while (k < order.size()) {
      if (snapshots.size() <= k) snapshots.push_back(result_.world);
      const GroundLiteral& lit = def_.init[order[k]];
      auto args = ground(lit);
      auto& record = result_.attempts[order[k]];
      if (is_fixture(args[0]) && holds(lit)) {
        ++k;
        continue;
      }
      SampleResult r;
      try {
        r = sample(world(), kb_, lit.predicate, args, true);
      } catch (const PredicateError& e) {
        throw InstantiationError("cannot sample " + record.literal + ": " + e.what(), record.literal);
      }
      record.attempts += r.attempts;
      record.sampled = true;
      if (r) {
        ++k;
        continue;
      }
      last_failure_ = record.literal;
      last_message_ = r.message;
      if (++failures >= options_.local_failures) return false;
      // Step back one literal and redraw it with the advanced generator.
      std::size_t back = k == 0 ? 0 : k - 1;
      Rng rng = result_.world.rng;
      result_.world = snapshots[back];
      result_.world.rng = rng;
      snapshots.resize(back + 1);
      k = back;
    }
    return true;
  }

  void sample_simple(std::size_t index) {
    const GroundLiteral& lit = def_.init[index];
    auto& record = result_.attempts[index];
    if (lit.predicate == P::Future || lit.predicate == P::InRoom || lit.predicate == P::Real) return;
    if (holds(lit) || !sampleable(lit.predicate, lit.positive)) return;
    auto args = ground(lit);
    SampleResult r;
    try {
      r = sample(world(), kb_, lit.predicate, args, lit.positive);
    } catch (const PredicateError& e) {
      throw InstantiationError("cannot sample " + record.literal + ": " + e.what(), record.literal);
    }
    record.attempts += r.attempts;
    record.sampled = true;
    if (!r) throw InstantiationError("cannot sample " + record.literal + ": " + r.message, record.literal);
  }

  const ActivityDefinition& def_;
  const KnowledgeBase& kb_;
  InstantiateOptions options_;
  Instantiation result_;
  std::string last_failure_;
  std::string last_message_;
};

}  // namespace

Instantiation instantiate_activity(const ActivityDefinition& def, const WorldState& scene, const KnowledgeBase& kb,
                                   std::uint64_t seed, const InstantiateOptions& options) {
  DiagnosticList diags = validate_problem(def, kb);
  for (const auto& d : diags)
    if (d.severity == Severity::Error) throw InstantiationError("invalid definition: " + format(d));
  CanonicalActivity canon = canonicalize(def, kb);
  return Instantiator(canon.definition, scene, kb, seed, options).run();
}

}  // namespace bddl
