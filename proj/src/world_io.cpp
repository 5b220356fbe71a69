#include <fstream>

#include <nlohmann/json.hpp>

#include "bddl/kb.hpp"
#include "bddl/world.hpp"

namespace bddl {

using nlohmann::json;

namespace {

constexpr const char* kSchema = "bddlkit.world/1";

json vec(Vec3 v) { return json::array({v.x, v.y, v.z}); }

Vec3 read_vec(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw WorldError(what + " must be an array of three numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json config_to_json(const WorldConfig& c) {
  return {{"ambient_temperature", c.ambient_temperature},
          {"k_heat", c.k_heat},
          {"k_ambient", c.k_ambient},
          {"heat_radius", c.heat_radius},
          {"contact_epsilon", c.contact_epsilon},
          {"particle_contact", c.particle_contact},
          {"absorb_rate", c.absorb_rate},
          {"emit_rate", c.emit_rate},
          {"liquid_particle_volume", c.liquid_particle_volume},
          {"next_to_factor", c.next_to_factor},
          {"sample_attempts", c.sample_attempts},
          {"fov_half_angle", c.fov_half_angle},
          {"fov_range", c.fov_range},
          {"base_speed", c.base_speed},
          {"manipulation_duration", c.manipulation_duration},
          {"standoff", c.standoff},
          {"agent_half_extents", vec(c.agent_half_extents)}};
}

void config_from_json(const json& j, WorldConfig& c) {
  auto num = [&](const char* key, double& field) {
    if (j.contains(key)) field = j[key].get<double>();
  };
  num("ambient_temperature", c.ambient_temperature);
  num("k_heat", c.k_heat);
  num("k_ambient", c.k_ambient);
  num("heat_radius", c.heat_radius);
  num("contact_epsilon", c.contact_epsilon);
  num("particle_contact", c.particle_contact);
  num("absorb_rate", c.absorb_rate);
  num("emit_rate", c.emit_rate);
  num("liquid_particle_volume", c.liquid_particle_volume);
  num("next_to_factor", c.next_to_factor);
  if (j.contains("sample_attempts")) c.sample_attempts = j["sample_attempts"].get<int>();
  num("fov_half_angle", c.fov_half_angle);
  num("fov_range", c.fov_range);
  num("base_speed", c.base_speed);
  num("manipulation_duration", c.manipulation_duration);
  num("standoff", c.standoff);
  if (j.contains("agent_half_extents")) c.agent_half_extents = read_vec(j["agent_half_extents"], "agent_half_extents");
}

json object_to_json(const ObjectState& o) {
  json j{{"id", o.id},
         {"synset", o.synset},
         {"real", o.real},
         {"placed", o.placed},
         {"fixed", o.fixed},
         {"is_floor", o.is_floor},
         {"sliced_half", o.sliced_half},
         {"position", vec(o.position)},
         {"yaw", o.yaw},
         {"half_extents", vec(o.half_extents)},
         {"temperature", o.temperature},
         {"max_temperature", o.max_temperature},
         {"soaked", o.soaked},
         {"covered", o.covered},
         {"toggled_on", o.toggled_on},
         {"sliced", o.sliced},
         {"broken", o.broken},
         {"connected_to", o.connected_to},
         {"replaced_by", o.replaced_by},
         {"absorb_credit", o.absorb_credit},
         {"emit_credit", o.emit_credit}};
  json joints = json::array();
  for (const auto& jt : o.joints)
    joints.push_back({{"name", jt.name},
                      {"type", jt.type == JointType::Prismatic ? "prismatic" : "revolute"},
                      {"lower", jt.lower},
                      {"upper", jt.upper},
                      {"value", jt.value},
                      {"relevant", jt.relevant},
                      {"link_radius", jt.link_radius}});
  j["joints"] = std::move(joints);
  if (!o.cloth_keypoints.empty()) {
    json kp = json::array();
    for (const auto& p : o.cloth_keypoints) kp.push_back(vec(p));
    j["cloth_keypoints"] = std::move(kp);
  }
  if (o.fold_threshold) j["fold_threshold"] = *o.fold_threshold;
  if (o.unfold_threshold) j["unfold_threshold"] = *o.unfold_threshold;
  if (o.container) j["container"] = {{"offset", vec(o.container->offset)}, {"half_extents", vec(o.container->half_extents)}};
  if (o.source_point) j["source_point"] = vec(*o.source_point);
  if (o.sink_point) j["sink_point"] = vec(*o.sink_point);
  if (o.toggle_point) j["toggle_point"] = vec(*o.toggle_point);
  if (o.insource) j["insource"] = *o.insource;
  if (!o.assembly_pairs.empty()) {
    json pairs = json::array();
    for (const auto& [a, b] : o.assembly_pairs) pairs.push_back({a, b});
    j["assembly_pairs"] = std::move(pairs);
  }
  return j;
}

ObjectState object_from_json(const json& j, double ambient) {
  ObjectState o;
  o.id = j.at("id").get<std::string>();
  o.synset = j.at("synset").get<std::string>();
  o.real = j.value("real", true);
  o.placed = j.value("placed", true);
  o.fixed = j.value("fixed", false);
  o.is_floor = j.value("is_floor", false);
  o.sliced_half = j.value("sliced_half", false);
  if (j.contains("position")) o.position = read_vec(j["position"], "position of " + o.id);
  o.yaw = j.value("yaw", 0.0);
  if (j.contains("half_extents")) o.half_extents = read_vec(j["half_extents"], "half_extents of " + o.id);
  if (o.half_extents.x <= 0 || o.half_extents.y <= 0 || o.half_extents.z <= 0)
    throw WorldError("half_extents of " + o.id + " must be positive");
  o.temperature = j.value("temperature", ambient);
  o.max_temperature = std::max(j.value("max_temperature", o.temperature), o.temperature);
  o.soaked = j.value("soaked", std::map<std::string, int>{});
  o.covered = j.value("covered", std::map<std::string, int>{});
  o.toggled_on = j.value("toggled_on", false);
  o.sliced = j.value("sliced", false);
  o.broken = j.value("broken", false);
  o.connected_to = j.value("connected_to", std::set<std::string>{});
  o.replaced_by = j.value("replaced_by", std::vector<std::string>{});
  o.absorb_credit = j.value("absorb_credit", std::map<std::string, double>{});
  o.emit_credit = j.value("emit_credit", 0.0);
  for (const auto& jt : j.value("joints", json::array())) {
    Joint joint;
    joint.name = jt.at("name").get<std::string>();
    std::string type = jt.value("type", std::string("prismatic"));
    if (type != "prismatic" && type != "revolute") throw WorldError("unknown joint type '" + type + "'");
    joint.type = type == "prismatic" ? JointType::Prismatic : JointType::Revolute;
    joint.lower = jt.at("lower").get<double>();
    joint.upper = jt.at("upper").get<double>();
    joint.value = jt.value("value", joint.lower);
    joint.relevant = jt.value("relevant", true);
    joint.link_radius = jt.value("link_radius", 0.5);
    if (!(joint.lower <= joint.value && joint.value <= joint.upper))
      throw WorldError("joint " + joint.name + " of " + o.id + " is outside its limits");
    o.joints.push_back(std::move(joint));
  }
  for (const auto& p : j.value("cloth_keypoints", json::array())) o.cloth_keypoints.push_back(read_vec(p, "keypoint"));
  if (j.contains("fold_threshold")) o.fold_threshold = j["fold_threshold"].get<double>();
  if (j.contains("unfold_threshold")) o.unfold_threshold = j["unfold_threshold"].get<double>();
  if (j.contains("container"))
    o.container = ContainerVolume{read_vec(j["container"].at("offset"), "container offset"),
                                  read_vec(j["container"].at("half_extents"), "container half_extents")};
  if (j.contains("source_point")) o.source_point = read_vec(j["source_point"], "source_point");
  if (j.contains("sink_point")) o.sink_point = read_vec(j["sink_point"], "sink_point");
  if (j.contains("toggle_point")) o.toggle_point = read_vec(j["toggle_point"], "toggle_point");
  if (j.contains("insource")) o.insource = j["insource"].get<std::string>();
  for (const auto& p : j.value("assembly_pairs", json::array()))
    o.assembly_pairs.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
  return o;
}

ObjectState make_agent(const WorldConfig& c, Vec3 position) {
  ObjectState a;
  a.id = std::string(kAgentId);
  a.synset = "agent.n.01";
  a.position = position;
  a.half_extents = c.agent_half_extents;
  a.temperature = c.ambient_temperature;
  a.max_temperature = c.ambient_temperature;
  return a;
}

WorldState parse_world(const json& doc, const KnowledgeBase* kb, DiagnosticList* warnings) {
  if (!doc.is_object()) throw WorldError("world document must be a JSON object");
  if (doc.contains("schema") && doc["schema"] != kSchema)
    throw WorldError("unsupported world schema " + doc["schema"].dump());
  WorldState w;
  if (doc.contains("config")) config_from_json(doc["config"], w.config);
  w.clock = doc.value("clock", 0.0);
  if (doc.contains("rng_state")) w.rng = Rng::from_state(doc["rng_state"].get<std::string>());
  w.fresh_counters = doc.value("fresh_counters", std::map<std::string, int>{});

  for (const auto& r : doc.value("rooms", json::array())) {
    Room room;
    room.id = r.at("id").get<std::string>();
    room.type = r.at("type").get<std::string>();
    for (const auto& rect : r.at("rects")) {
      if (!rect.is_array() || rect.size() != 4) throw WorldError("room rect must be [xmin, ymin, xmax, ymax]");
      Rect q{rect[0].get<double>(), rect[1].get<double>(), rect[2].get<double>(), rect[3].get<double>()};
      if (!(q.xmin < q.xmax && q.ymin < q.ymax)) throw WorldError("degenerate rect in room " + room.id);
      room.rects.push_back(q);
    }
    if (room.rects.empty()) throw WorldError("room " + room.id + " has no floor rectangles");
    for (const auto& other : w.rooms) {
      if (other.id == room.id) throw WorldError("duplicate room id " + room.id);
      for (const auto& a : other.rects)
        for (const auto& b : room.rects)
          if (a.overlaps(b)) throw WorldError("rooms " + other.id + " and " + room.id + " overlap");
    }
    w.rooms.push_back(std::move(room));
  }

  bool explicit_floors = false;
  for (const auto& jo : doc.value("objects", json::array())) {
    ObjectState o = object_from_json(jo, w.config.ambient_temperature);
    if (kb && !o.is_floor && o.id != kAgentId) {
      if (!kb->contains(o.synset)) throw WorldError("object " + o.id + " has unknown synset " + o.synset);
      if (!kb->is_leaf(o.synset)) throw WorldError("object " + o.id + " must use a leaf synset, not " + o.synset);
      if (!jo.contains("half_extents")) o.half_extents = kb->default_half_extents(o.synset);
      ObjectState d = o;
      d.container.reset();
      d.joints.clear();
      d.toggle_point.reset();
      d.source_point.reset();
      apply_default_features(*kb, d);
      if (!jo.contains("container")) o.container = d.container;
      if (!jo.contains("joints")) o.joints = d.joints;
      if (!jo.contains("toggle_point")) o.toggle_point = d.toggle_point;
      if (!jo.contains("source_point")) o.source_point = d.source_point;
    }
    explicit_floors = explicit_floors || o.is_floor;
    if (w.objects.count(o.id)) throw WorldError("duplicate object id " + o.id);
    w.objects.emplace(o.id, std::move(o));
  }
  if (!explicit_floors) {
    for (const auto& room : w.rooms) {
      Rect b = room.rects.front();
      for (const auto& r : room.rects) {
        b.xmin = std::min(b.xmin, r.xmin);
        b.ymin = std::min(b.ymin, r.ymin);
        b.xmax = std::max(b.xmax, r.xmax);
        b.ymax = std::max(b.ymax, r.ymax);
      }
      ObjectState f;
      f.id = "floor_" + room.id;
      f.synset = "floor.n.01";
      f.is_floor = true;
      f.fixed = true;
      f.position = {(b.xmin + b.xmax) / 2, (b.ymin + b.ymax) / 2, -0.05};
      f.half_extents = {(b.xmax - b.xmin) / 2, (b.ymax - b.ymin) / 2, 0.05};
      f.temperature = f.max_temperature = w.config.ambient_temperature;
      if (w.objects.count(f.id)) throw WorldError("object id " + f.id + " is reserved for a room floor");
      w.objects.emplace(f.id, std::move(f));
    }
  }

  if (!w.objects.count(std::string(kAgentId))) {
    Vec3 p{0, 0, w.config.agent_half_extents.z};
    if (doc.contains("agent") && doc["agent"].contains("position")) {
      const auto& pos = doc["agent"]["position"];
      p.x = pos.at(0).get<double>();
      p.y = pos.at(1).get<double>();
      if (pos.size() > 2) p.z = pos.at(2).get<double>();
    }
    w.objects.emplace(std::string(kAgentId), make_agent(w.config, p));
  }
  if (doc.contains("agent")) {
    const auto& a = doc["agent"];
    w.agent.heading = a.value("heading", 0.0);
    w.agent.reach = a.value("reach", kb ? kb->defaults().reach_distance : 2.0);
    if (a.contains("held") && !a["held"].is_null()) w.agent.held = a["held"].get<std::string>();
  } else if (kb) {
    w.agent.reach = kb->defaults().reach_distance;
  }
  if (w.agent.held) {
    const auto* h = w.find(*w.agent.held);
    if (!h || !h->real) throw WorldError("held object " + *w.agent.held + " is not a real object");
  }

  for (const auto& s : doc.value("substances", json::array())) {
    ParticleSystem ps;
    ps.synset = s.at("synset").get<std::string>();
    auto kind = parse_substance_kind(s.value("kind", std::string("liquid")));
    if (!kind) throw WorldError("unknown substance kind for " + ps.synset);
    ps.kind = *kind;
    if (kb) {
      auto kk = kb->substance_kind(ps.synset);
      if (!kk) throw WorldError(ps.synset + " is not a substance in the knowledge base");
      ps.kind = *kk;
    }
    ps.particle_volume = s.value("particle_volume", w.config.liquid_particle_volume);
    ps.base_temperature = s.value("base_temperature", w.config.ambient_temperature);
    for (const auto& p : s.value("particles", json::array())) {
      if (!p.is_array() || (p.size() != 3 && p.size() != 4)) throw WorldError("particle must be [x, y, z] or [x, y, z, T]");
      ps.particles.push_back({{p[0].get<double>(), p[1].get<double>(), p[2].get<double>()},
                              p.size() == 4 ? p[3].get<double>() : ps.base_temperature});
    }
    w.substances.emplace(ps.synset, std::move(ps));
  }

  if (warnings) {
    for (const auto& [id, o] : w.objects) {
      if (o.is_floor || !o.spatial()) continue;
      if (!w.room_at(o.position.x, o.position.y))
        warnings->push_back({Severity::Warning, "outside-rooms", "object " + id + " lies outside every room", {}});
    }
  }
  return w;
}

}  // namespace

WorldState load_scene(const json& doc, const KnowledgeBase& kb, DiagnosticList* warnings) {
  try {
    return parse_world(doc, &kb, warnings);
  } catch (const json::exception& e) {
    throw WorldError(std::string("malformed scene document: ") + e.what());
  }
}

WorldState load_scene_file(const std::string& path, const KnowledgeBase& kb, DiagnosticList* warnings) {
  std::ifstream in(path);
  if (!in) throw WorldError("cannot open scene file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw WorldError("scene file " + path + " is not valid JSON: " + e.what());
  }
  return load_scene(doc, kb, warnings);
}

WorldState world_from_json(const json& doc) {
  try {
    return parse_world(doc, nullptr, nullptr);
  } catch (const json::exception& e) {
    throw WorldError(std::string("malformed world snapshot: ") + e.what());
  }
}

json world_to_json(const WorldState& w) {
  json doc;
  doc["schema"] = kSchema;
  doc["clock"] = w.clock;
  doc["rng_state"] = w.rng.state();
  doc["config"] = config_to_json(w.config);
  doc["fresh_counters"] = w.fresh_counters;
  json rooms = json::array();
  for (const auto& r : w.rooms) {
    json rects = json::array();
    for (const auto& q : r.rects) rects.push_back({q.xmin, q.ymin, q.xmax, q.ymax});
    rooms.push_back({{"id", r.id}, {"type", r.type}, {"rects", std::move(rects)}});
  }
  doc["rooms"] = std::move(rooms);
  json objects = json::array();
  for (const auto& [id, o] : w.objects) objects.push_back(object_to_json(o));
  doc["objects"] = std::move(objects);
  json subs = json::array();
  for (const auto& [syn, s] : w.substances) {
    json parts = json::array();
    for (const auto& p : s.particles) parts.push_back({p.position.x, p.position.y, p.position.z, p.temperature});
    subs.push_back({{"synset", syn},
                    {"kind", substance_kind_name(s.kind)},
                    {"particle_volume", s.particle_volume},
                    {"base_temperature", s.base_temperature},
                    {"particles", std::move(parts)}});
  }
  doc["substances"] = std::move(subs);
  const ObjectState* agent = w.find(kAgentId);
  json a{{"heading", w.agent.heading}, {"reach", w.agent.reach}, {"held", nullptr}};
  if (agent) a["position"] = vec(agent->position);
  if (w.agent.held) a["held"] = *w.agent.held;
  doc["agent"] = std::move(a);
  return doc;
}

}  // namespace bddl
