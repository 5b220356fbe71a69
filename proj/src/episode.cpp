#include <cmath>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "bddl/engine.hpp"
#include "bddl/predicates.hpp"

namespace bddl {

namespace {

using json = nlohmann::json;

constexpr const char* kScriptSchema = "bddlkit.script/1";
constexpr const char* kReportSchema = "bddlkit.report/1";

struct Pose {
  Vec3 position;
  std::vector<double> joints;
};

std::map<std::string, Pose> poses(const WorldState& world) {
  std::map<std::string, Pose> out;
  for (const auto& [id, o] : world.objects) {
    if (!o.spatial() || id == kAgentId || o.is_floor) continue;
    Pose p{o.position, {}};
    for (const auto& j : o.joints) p.joints.push_back(j.value);
    out.emplace(id, std::move(p));
  }
  return out;
}

// Objects that moved during one primitive, excluding the agent and anything
// held before or after it.
std::vector<Displacement> moved_objects(const WorldState& after, const std::map<std::string, Pose>& before,
                                        const std::optional<std::string>& held_before) {
  std::vector<Displacement> out;
  for (const auto& [id, pose] : before) {
    if ((held_before && *held_before == id) || (after.agent.held && *after.agent.held == id)) continue;
    const ObjectState* o = after.find(id);
    if (!o || !o->spatial()) continue;
    Displacement d{id, pose.position, o->position, 0.0};
    for (std::size_t k = 0; k < o->joints.size() && k < pose.joints.size(); ++k)
      d.joint_travel += o->joints[k].displacement(pose.joints[k], o->joints[k].value);
    if (d.from != d.to || d.joint_travel != 0.0) out.push_back(std::move(d));
  }
  return out;
}

json vec(Vec3 v) { return json::array({v.x, v.y, v.z}); }
Vec3 vec_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

}  // namespace

double displacement_magnitude(const Displacement& d) { return (d.to - d.from).norm() + d.joint_travel; }

EpisodeReport run_episode(WorldState& world, const KnowledgeBase& kb, const Grounding& grounding, const Formula& goal,
                          const std::vector<Primitive>& script, double dt) {
  const Formula normalized = is_normalized(goal) ? goal : normalize(goal);
  EpisodeReport report;
  GoalEvaluation eval = evaluate_goal(world, kb, grounding, normalized);
  for (std::size_t i = 0; i < script.size() && !eval.satisfied; ++i) {
    auto before = poses(world);
    auto held_before = world.agent.held;
    PrimitiveOutcome out = execute_primitive(world, kb, grounding, script[i], dt);
    TraceRecord rec;
    rec.index = i;
    rec.primitive = script[i];
    rec.ok = out.ok;
    rec.message = out.message;
    rec.path_length = out.path_length;
    rec.duration = out.duration;
    if (out.ok) rec.moved = moved_objects(world, before, held_before);
    eval = evaluate_goal(world, kb, grounding, normalized);
    rec.goal_satisfied = eval.satisfied;
    rec.q_score = eval.q_score;

    report.dist_nav += rec.path_length;
    report.sim_time += rec.duration;
    for (const auto& d : rec.moved) report.kin_dis += displacement_magnitude(d);
    ++report.primitive_count;
    report.trace.push_back(std::move(rec));
  }
  report.success = eval.satisfied;
  report.q_score = eval.q_score;
  return report;
}

Metrics compute_metrics(const std::vector<TraceRecord>& trace) {
  Metrics m;
  for (const auto& rec : trace) {
    if (rec.path_length < 0.0 || rec.duration < 0.0) throw std::invalid_argument("malformed trace: negative metric");
    m.dist_nav += rec.path_length;
    m.sim_time += rec.duration;
    for (const auto& d : rec.moved) m.kin_dis += displacement_magnitude(d);
  }
  return m;
}

json primitive_to_json(const Primitive& p) {
  json j{{"kind", primitive_name(p.kind)}, {"target", p.target}};
  if (p.relation) j["relation"] = bddl_name(*p.relation);
  if (p.kind == PrimitiveKind::Push) j["open"] = p.open;
  return j;
}

Primitive primitive_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("primitive must be an object");
  Primitive p;
  auto kind = parse_primitive_kind(j.at("kind").get<std::string>());
  if (!kind) throw std::invalid_argument("unknown primitive kind " + j.at("kind").dump());
  p.kind = *kind;
  p.target = j.at("target").get<std::string>();
  if (j.contains("relation")) {
    auto rel = lookup_predicate(j["relation"].get<std::string>());
    if (!rel || (*rel != Predicate::OnTopOf && *rel != Predicate::InsideOf))
      throw std::invalid_argument("placement relation must be ontop or inside");
    p.relation = rel;
  }
  if (p.kind == PrimitiveKind::Place && !p.relation) throw std::invalid_argument("place needs a relation");
  p.open = j.value("open", true);
  for (const auto& [key, value] : j.items())
    if (key != "kind" && key != "target" && key != "relation" && key != "open")
      throw std::invalid_argument("unknown primitive field '" + key + "'");
  return p;
}

std::vector<Primitive> script_from_json(const json& doc) {
  if (!doc.is_object() || doc.value("schema", "") != kScriptSchema)
    throw std::invalid_argument(std::string("script must declare schema ") + kScriptSchema);
  std::vector<Primitive> out;
  for (const auto& p : doc.at("primitives")) out.push_back(primitive_from_json(p));
  return out;
}

json script_to_json(const std::vector<Primitive>& script) {
  json prims = json::array();
  for (const auto& p : script) prims.push_back(primitive_to_json(p));
  return {{"schema", kScriptSchema}, {"primitives", prims}};
}

std::vector<Primitive> load_script_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return script_from_json(json::parse(in));
}

json grounding_to_json(const Grounding& g) { return {{"instances", g.instances}, {"rooms", g.rooms}}; }

Grounding grounding_from_json(const json& j) {
  Grounding g;
  g.instances = j.value("instances", std::map<std::string, std::string>{});
  g.rooms = j.value("rooms", std::map<std::string, std::string>{});
  return g;
}

json report_to_json(const EpisodeReport& r) {
  json trace = json::array();
  for (const auto& rec : r.trace) {
    json moved = json::array();
    for (const auto& d : rec.moved)
      moved.push_back({{"id", d.id}, {"from", vec(d.from)}, {"to", vec(d.to)}, {"joint_travel", d.joint_travel}});
    trace.push_back({{"index", rec.index},
                     {"primitive", primitive_to_json(rec.primitive)},
                     {"ok", rec.ok},
                     {"message", rec.message},
                     {"path_length", rec.path_length},
                     {"duration", rec.duration},
                     {"moved", moved},
                     {"goal_satisfied", rec.goal_satisfied},
                     {"q_score", rec.q_score}});
  }
  return {{"schema", kReportSchema},
          {"success", r.success},
          {"q_score", r.q_score},
          {"dist_nav", r.dist_nav},
          {"sim_time", r.sim_time},
          {"kin_dis", r.kin_dis},
          {"primitive_count", r.primitive_count},
          {"trace", trace}};
}

std::vector<TraceRecord> trace_from_json(const json& j) {
  std::vector<TraceRecord> out;
  for (const auto& t : j) {
    TraceRecord rec;
    rec.index = t.at("index").get<std::size_t>();
    rec.primitive = primitive_from_json(t.at("primitive"));
    rec.ok = t.at("ok").get<bool>();
    rec.message = t.value("message", "");
    rec.path_length = t.at("path_length").get<double>();
    rec.duration = t.at("duration").get<double>();
    for (const auto& m : t.at("moved"))
      rec.moved.push_back({m.at("id").get<std::string>(), vec_from(m.at("from")), vec_from(m.at("to")),
                           m.at("joint_travel").get<double>()});
    rec.goal_satisfied = t.value("goal_satisfied", false);
    rec.q_score = t.value("q_score", 0.0);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace bddl
