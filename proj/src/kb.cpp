#include "bddl/kb.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <functional>

#include <nlohmann/json.hpp>

namespace bddl {

using nlohmann::json;

namespace {

struct ParameterInfo {
  std::string_view name;
  std::optional<Property> property;
  double Defaults::*fallback;
  double PropertyParameters::*field;
};

const std::array<ParameterInfo, 15> kParameters{{
    {"cook_temperature", Property::Cookable, &Defaults::cook_temperature, &PropertyParameters::cook_temperature},
    {"burnt_temperature", Property::Cookable, &Defaults::burnt_temperature, &PropertyParameters::burnt_temperature},
    {"heat_source_temperature", Property::HeatSource, &Defaults::heat_source_temperature,
     &PropertyParameters::heat_source_temperature},
    {"cold_source_temperature", Property::ColdSource, &Defaults::cold_source_temperature,
     &PropertyParameters::cold_source_temperature},
    {"fire_source_temperature", Property::FireSource, &Defaults::fire_source_temperature,
     &PropertyParameters::fire_source_temperature},
    {"onfire_temperature", Property::Flammable, &Defaults::onfire_temperature, &PropertyParameters::onfire_temperature},
    {"freeze_temperature", Property::Freezable, &Defaults::freeze_temperature, &PropertyParameters::freeze_temperature},
    {"heated_temperature", Property::Heatable, &Defaults::heated_temperature, &PropertyParameters::heated_temperature},
    {"boiling_temperature", Property::Liquid, &Defaults::boiling_temperature, &PropertyParameters::boiling_temperature},
    {"slice_force", Property::Sliceable, &Defaults::slice_force, &PropertyParameters::slice_force},
    {"break_force", Property::Breakable, &Defaults::break_force, &PropertyParameters::break_force},
    {"soak_threshold", Property::ParticleRemover, &Defaults::soak_threshold, &PropertyParameters::soak_threshold},
    {"fill_threshold", Property::Fillable, &Defaults::fill_threshold, &PropertyParameters::fill_threshold},
    {"cover_threshold", std::nullopt, &Defaults::cover_threshold, &PropertyParameters::cover_threshold},
    {"reach_distance", std::nullopt, &Defaults::reach_distance, &PropertyParameters::reach_distance},
}};

const ParameterInfo* find_parameter(std::string_view name) {
  for (const auto& p : kParameters)
    if (p.name == name) return &p;
  return nullptr;
}

// Parameters that are thresholds rather than temperatures must be positive.
bool must_be_positive(std::string_view name) { return name.find("temperature") == std::string_view::npos; }

Vec3 read_vec3(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw KbError(what + " must be an array of three numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

UnknownSynset::UnknownSynset(std::string_view synset) : KbError("unknown synset '" + std::string(synset) + "'") {}

std::optional<Property> parameter_property(std::string_view name) {
  const auto* p = find_parameter(name);
  return p ? p->property : std::nullopt;
}

bool is_known_parameter(std::string_view name) { return find_parameter(name) != nullptr; }

void KnowledgeBase::add_synset(std::string id, std::vector<std::string> parents, PropertySet annotated) {
  if (synsets_.count(id)) throw KbError("duplicate synset '" + id + "'");
  SynsetRecord r;
  r.id = id;
  r.parents = std::move(parents);
  r.annotated = annotated;
  synsets_.emplace(std::move(id), std::move(r));
  finalized_ = false;
}

void KnowledgeBase::set_parameter(std::string synset, std::string name, double value) {
  if (!is_known_parameter(name)) throw KbError("unknown parameter '" + name + "'");
  parameters_[synset][name] = value;
  finalized_ = false;
}

void KnowledgeBase::check_acyclic() const {
  // 0 = unvisited, 1 = on stack, 2 = done
  std::map<std::string_view, int> state;
  std::function<void(const SynsetRecord&)> visit = [&](const SynsetRecord& r) {
    int& s = state[r.id];
    if (s == 2) return;
    if (s == 1) throw KbError("cycle detected at synset '" + r.id + "'");
    s = 1;
    for (const auto& p : r.parents) visit(synsets_.find(p)->second);
    state[r.id] = 2;
  };
  for (const auto& [id, r] : synsets_) visit(r);
}

PropertySet KnowledgeBase::derived_leaf_properties(const SynsetRecord& r) const {
  PropertySet s;
  for (Property p : r.annotated.to_vector())
    if (!is_derived(p)) s.insert(p);
  auto has = [&](Property p) { return s.contains(p); };
  if (has(Property::MicroPhysicalSubstance) || has(Property::MacroPhysicalSubstance))
    s.insert(Property::PhysicalSubstance);
  if (has(Property::SoftBody) || has(Property::Cloth) || has(Property::Rope)) s.insert(Property::Deformable);
  if (has(Property::Cloth) || has(Property::SoftBody)) {
    s.insert(Property::Foldable);
    s.insert(Property::Unfoldable);
  }
  if (has(Property::Cloth) || has(Property::Rope)) s.insert(Property::Drapeable);
  if (has(Property::Liquid) || has(Property::VisualSubstance) || has(Property::PhysicalSubstance))
    s.insert(Property::Substance);
  if (has(Property::RigidBody) || has(Property::Liquid)) {
    s.insert(Property::Heatable);
    s.insert(Property::Freezable);
  }
  constexpr std::string_view kHalf = "half__";
  if (r.id.rfind(kHalf, 0) == 0) {
    auto whole = synsets_.find(r.id.substr(kHalf.size()));
    if (whole != synsets_.end() && whole->second.children.empty() &&
        whole->second.annotated.contains(Property::Sliceable))
      s.insert(Property::Diceable);
  }
  return s;
}

void KnowledgeBase::finalize() {
  for (auto& [id, r] : synsets_) r.children.clear();
  for (auto& [id, r] : synsets_) {
    for (const auto& p : r.parents) {
      auto it = synsets_.find(p);
      if (it == synsets_.end()) throw KbError("synset '" + id + "' names unknown parent '" + p + "'");
      it->second.children.push_back(id);
    }
  }
  for (auto& [id, r] : synsets_) std::sort(r.children.begin(), r.children.end());
  check_acyclic();

  inferred_.clear();
  for (const auto& [id, r] : synsets_)
    if (r.children.empty()) inferred_[id] = derived_leaf_properties(r);
  for (const auto& [id, r] : synsets_) {
    if (!r.children.empty()) {
      PropertySet s = PropertySet::all();
      for (const auto& leaf : descendant_leaves(id)) s &= inferred_.find(leaf)->second;
      inferred_[id] = s;
    }
  }

  for (const auto& [syn, params] : parameters_) {
    if (!contains(syn)) throw UnknownSynset(syn);
    if (!is_leaf(syn)) throw KbError("parameters attach to leaf synsets only; '" + syn + "' is not a leaf");
    for (const auto& [name, value] : params) {
      auto prop = parameter_property(name);
      if (prop && !has_property(syn, *prop))
        throw KbError("parameter " + name + " on " + syn + " requires property " + std::string(property_name(*prop)));
      if (must_be_positive(name) && !(value > 0))
        throw KbError("parameter " + name + " on " + syn + " must be positive");
    }
  }
  for (const auto& [id, r] : synsets_) {
    if (!r.children.empty() || !has_property(id, Property::Cookable)) continue;
    auto p = parameters(id);
    if (!(p.cook_temperature < p.burnt_temperature))
      throw KbError("cook_temperature must be below burnt_temperature for '" + id + "'");
  }
  install_default_cleaning_rules();
  for (const auto& rule : rules_) validate_rule(rule);
  for (const auto& rule : cleaning_rules_) validate_cleaning_rule(rule);
  finalized_ = true;
}

void KnowledgeBase::install_default_cleaning_rules() {
  auto covered = [&](std::string_view substance) {
    return std::any_of(cleaning_rules_.begin(), cleaning_rules_.end(), [&](const CleaningRule& r) {
      return std::find(r.substances.begin(), r.substances.end(), substance) != r.substances.end();
    });
  };
  if (contains("dust.n.01") && !covered("dust.n.01"))
    cleaning_rules_.push_back({"default-dust", {"dust.n.01"}, {}, {}});
  if (contains("mold.n.05") && contains("water.n.06") && !covered("mold.n.05"))
    cleaning_rules_.push_back({"default-mold", {"mold.n.05"}, {}, {"water.n.06"}});
}

void KnowledgeBase::validate_rule(const TransitionRule& rule) const {
  auto known = [&](const std::string& s) {
    if (!contains(s)) throw KbError("rule '" + rule.id + "' names unknown synset '" + s + "'");
  };
  if (rule.id.empty()) throw KbError("transition rule without an id");
  if (rule.inputs.empty() || rule.outputs.empty())
    throw KbError("rule '" + rule.id + "' needs at least one input and one output");
  for (const auto& in : rule.inputs) {
    known(in.synset);
    if (in.count < 1) throw KbError("rule '" + rule.id + "' has a non-positive input count");
  }
  for (const auto& out : rule.outputs) {
    known(out.synset);
    if (out.count < 1) throw KbError("rule '" + rule.id + "' has a non-positive output count");
    if (descendant_leaves(out.synset).empty())
      throw KbError("rule '" + rule.id + "' output '" + out.synset + "' resolves to no leaf");
  }
  known(rule.machine.synset);
  if (rule.machine.requires_toggled_on && !has_property(rule.machine.synset, Property::Toggleable))
    throw KbError("rule '" + rule.id + "' machine " + rule.machine.synset + " is not toggleable");
  if (rule.machine.min_temperature && !has_property(rule.machine.synset, Property::HeatSource))
    throw KbError("rule '" + rule.id + "' machine " + rule.machine.synset + " is not a heat source");
  if (rule.min_duration != 0.0)
    throw KbError("rule '" + rule.id + "': min_duration is reserved and must be 0");
}

void KnowledgeBase::validate_cleaning_rule(const CleaningRule& rule) const {
  if (rule.substances.empty()) throw KbError("cleaning rule '" + rule.id + "' names no substance");
  for (const auto* list : {&rule.substances, &rule.remover_synsets, &rule.saturation})
    for (const auto& s : *list)
      if (!contains(s)) throw KbError("cleaning rule '" + rule.id + "' names unknown synset '" + s + "'");
}

void KnowledgeBase::add_rule(TransitionRule rule) {
  if (finalized_) validate_rule(rule);
  rules_.push_back(std::move(rule));
  std::stable_sort(rules_.begin(), rules_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
}

void KnowledgeBase::add_cleaning_rule(CleaningRule rule) {
  if (finalized_) validate_cleaning_rule(rule);
  // Explicit rules take precedence over the installed defaults.
  for (const auto& s : rule.substances)
    std::erase_if(cleaning_rules_, [&](const CleaningRule& r) {
      return r.id.rfind("default-", 0) == 0 && std::find(r.substances.begin(), r.substances.end(), s) != r.substances.end();
    });
  cleaning_rules_.push_back(std::move(rule));
}

const CleaningRule* KnowledgeBase::cleaning_rule_for(std::string_view substance) const {
  for (const auto& r : cleaning_rules_)
    for (const auto& s : r.substances)
      if (is_a(substance, s)) return &r;
  return nullptr;
}

bool KnowledgeBase::contains(std::string_view synset) const { return synsets_.find(synset) != synsets_.end(); }

const SynsetRecord& KnowledgeBase::record(std::string_view synset) const {
  auto it = synsets_.find(synset);
  if (it == synsets_.end()) throw UnknownSynset(synset);
  return it->second;
}

bool KnowledgeBase::is_leaf(std::string_view synset) const { return record(synset).children.empty(); }

std::vector<std::string> KnowledgeBase::synsets() const {
  std::vector<std::string> out;
  for (const auto& [id, r] : synsets_) out.push_back(id);
  return out;
}

PropertySet KnowledgeBase::infer_properties(std::string_view synset) const {
  auto it = inferred_.find(synset);
  if (it != inferred_.end()) return it->second;
  const auto& r = record(synset);  // throws for unknown synsets
  if (r.children.empty()) return derived_leaf_properties(r);
  PropertySet s = PropertySet::all();
  for (const auto& leaf : descendant_leaves(synset)) s &= derived_leaf_properties(record(leaf));
  return s;
}

bool KnowledgeBase::has_property(std::string_view synset, Property p) const {
  return infer_properties(synset).contains(p);
}

std::optional<SubstanceKind> KnowledgeBase::substance_kind(std::string_view synset) const {
  if (!contains(synset)) return std::nullopt;
  PropertySet s = infer_properties(synset);
  if (s.contains(Property::Liquid)) return SubstanceKind::Liquid;
  if (s.contains(Property::VisualSubstance)) return SubstanceKind::VisualSubstance;
  if (s.contains(Property::MacroPhysicalSubstance)) return SubstanceKind::MacroPhysicalSubstance;
  if (s.contains(Property::PhysicalSubstance)) return SubstanceKind::MicroPhysicalSubstance;
  return std::nullopt;
}

std::vector<std::string> KnowledgeBase::descendant_leaves(std::string_view synset) const {
  std::vector<std::string> out;
  std::vector<std::string_view> stack{record(synset).id};
  std::set<std::string_view> seen;
  while (!stack.empty()) {
    auto id = stack.back();
    stack.pop_back();
    if (!seen.insert(id).second) continue;
    const auto& r = record(id);
    if (r.children.empty()) out.push_back(r.id);
    for (const auto& c : r.children) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool KnowledgeBase::is_a(std::string_view synset, std::string_view ancestor) const {
  if (synset == ancestor) return true;
  auto it = synsets_.find(synset);
  if (it == synsets_.end()) return false;
  for (const auto& p : it->second.parents)
    if (is_a(p, ancestor)) return true;
  return false;
}

std::optional<double> KnowledgeBase::parameter(std::string_view synset, std::string_view name) const {
  if (!is_leaf(synset))
    throw KbError("parameters are defined on leaf synsets only; '" + std::string(synset) + "' is not a leaf");
  auto it = parameters_.find(synset);
  if (it == parameters_.end()) return std::nullopt;
  auto jt = it->second.find(name);
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

PropertyParameters KnowledgeBase::parameters(std::string_view leaf) const {
  PropertyParameters out{};
  for (const auto& info : kParameters) {
    auto v = parameter(leaf, info.name);
    out.*(info.field) = v ? *v : defaults_.*(info.fallback);
  }
  return out;
}

Vec3 KnowledgeBase::default_half_extents(std::string_view synset) const {
  std::vector<std::string_view> queue{record(synset).id};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const auto& r = record(queue[i]);
    if (r.half_extents) return *r.half_extents;
    for (const auto& p : r.parents) queue.push_back(p);
  }
  return {0.05, 0.05, 0.05};
}

KnowledgeBase KnowledgeBase::from_json(const json& doc) {
  KnowledgeBase kb;
  try {
    if (!doc.is_object()) throw KbError("kb document must be a JSON object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      static const std::set<std::string> kKeys{"schema", "synsets", "parameters", "transition_rules", "defaults"};
      if (!kKeys.count(it.key())) throw KbError("unknown top-level key '" + it.key() + "'");
    }
    if (doc.contains("defaults")) {
      for (auto it = doc["defaults"].begin(); it != doc["defaults"].end(); ++it) {
        const auto* info = find_parameter(it.key());
        if (!info) throw KbError("unknown default '" + it.key() + "'");
        kb.defaults_.*(info->fallback) = it.value().get<double>();
      }
    }
    for (const auto& s : doc.value("synsets", json::array())) {
      std::string id = s.at("id").get<std::string>();
      std::vector<std::string> parents = s.value("parents", std::vector<std::string>{});
      PropertySet props;
      for (const auto& name : s.value("properties", std::vector<std::string>{})) {
        auto p = parse_property(name);
        if (!p) throw KbError("unknown property '" + name + "' on synset '" + id + "'");
        props.insert(*p);
      }
      kb.add_synset(id, std::move(parents), props);
      if (s.contains("half_extents")) kb.synsets_[id].half_extents = read_vec3(s["half_extents"], "half_extents of " + id);
    }
    for (const auto& p : doc.value("parameters", json::array())) {
      std::string syn = p.at("synset").get<std::string>();
      std::string name = p.at("name").get<std::string>();
      if (!is_known_parameter(name)) throw KbError("unknown parameter '" + name + "' on '" + syn + "'");
      if (p.contains("property")) {
        auto expected = parameter_property(name);
        auto given = parse_property(p["property"].get<std::string>());
        if (!given || !expected || *given != *expected)
          throw KbError("parameter " + name + " is not attached to property " + p["property"].get<std::string>());
      }
      kb.set_parameter(syn, name, p.at("value").get<double>());
    }
    for (const auto& r : doc.value("transition_rules", json::array())) {
      std::string id = r.at("id").get<std::string>();
      if (r.value("type", std::string("composition")) == "cleaning") {
        kb.add_cleaning_rule({id, r.at("substances").get<std::vector<std::string>>(),
                              r.value("removers", std::vector<std::string>{}),
                              r.value("saturation", std::vector<std::string>{})});
        continue;
      }
      TransitionRule rule;
      rule.id = id;
      for (const auto& in : r.at("inputs"))
        rule.inputs.push_back({in.at("synset").get<std::string>(), in.value("count", 1), in.value("consumed", true)});
      for (const auto& out : r.at("outputs"))
        rule.outputs.push_back({out.at("synset").get<std::string>(), out.value("count", 1)});
      const auto& m = r.at("machine");
      rule.machine.synset = m.at("synset").get<std::string>();
      rule.machine.requires_toggled_on = m.value("toggled_on", false);
      if (m.contains("min_temperature")) rule.machine.min_temperature = m["min_temperature"].get<double>();
      rule.machine.requires_containment = m.value("containment", true);
      rule.min_duration = r.value("min_duration", 0.0);
      kb.add_rule(std::move(rule));
    }
  } catch (const json::exception& e) {
    throw KbError(std::string("malformed kb document: ") + e.what());
  }
  kb.finalize();
  return kb;
}

KnowledgeBase KnowledgeBase::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw KbError("cannot open kb file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw KbError("kb file " + path + " is not valid JSON: " + e.what());
  }
  return from_json(doc);
}

json KnowledgeBase::to_json() const {
  json doc;
  doc["schema"] = "bddlkit.kb/1";
  json syns = json::array();
  for (const auto& [id, r] : synsets_) {
    json s{{"id", id}};
    if (!r.parents.empty()) s["parents"] = r.parents;
    if (!r.annotated.empty()) s["properties"] = r.annotated.names();
    if (r.half_extents) s["half_extents"] = {r.half_extents->x, r.half_extents->y, r.half_extents->z};
    syns.push_back(std::move(s));
  }
  doc["synsets"] = std::move(syns);
  json params = json::array();
  for (const auto& [syn, ps] : parameters_)
    for (const auto& [name, v] : ps) params.push_back({{"synset", syn}, {"name", name}, {"value", v}});
  doc["parameters"] = std::move(params);
  json defaults = json::object();
  for (const auto& info : kParameters) defaults[std::string(info.name)] = defaults_.*(info.fallback);
  doc["defaults"] = std::move(defaults);
  json rules = json::array();
  for (const auto& r : rules_) {
    json j{{"id", r.id}, {"min_duration", r.min_duration}};
    for (const auto& in : r.inputs)
      j["inputs"].push_back({{"synset", in.synset}, {"count", in.count}, {"consumed", in.consumed}});
    for (const auto& out : r.outputs) j["outputs"].push_back({{"synset", out.synset}, {"count", out.count}});
    j["machine"] = {{"synset", r.machine.synset},
                    {"toggled_on", r.machine.requires_toggled_on},
                    {"containment", r.machine.requires_containment}};
    if (r.machine.min_temperature) j["machine"]["min_temperature"] = *r.machine.min_temperature;
    rules.push_back(std::move(j));
  }
  for (const auto& c : cleaning_rules_) {
    if (c.id.rfind("default-", 0) == 0) continue;
    rules.push_back({{"id", c.id},
                     {"type", "cleaning"},
                     {"substances", c.substances},
                     {"removers", c.remover_synsets},
                     {"saturation", c.saturation}});
  }
  doc["transition_rules"] = std::move(rules);
  return doc;
}

std::set<Predicate> applicable_predicates(const KnowledgeBase& kb, std::string_view synset) {
  using P = Predicate;
  PropertySet props = kb.infer_properties(synset);
  std::set<P> out{P::Real, P::Future};
  if (auto kind = kb.substance_kind(synset)) {
    out.insert({P::Filled, P::Empty, P::Covered});
    if (*kind == SubstanceKind::Liquid) out.insert({P::Soaked, P::Boiled});
    out.insert(P::InSource);
    return out;
  }
  out.insert({P::InsideOf, P::OnTopOf, P::NextTo, P::InContactWith, P::ConnectedWith, P::Under, P::OnFloor, P::Hung,
              P::Covered, P::Blended, P::InFoVOfAgent, P::InHandOfAgent, P::InReachOfAgent, P::InSameRoomAsAgent,
              P::InRoom});
  for (const auto& spec : predicate_specs())
    if (spec.requires_property && props.contains(*spec.requires_property)) out.insert(spec.id);
  return out;
}

}  // namespace bddl
