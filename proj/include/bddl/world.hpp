#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bddl/diagnostics.hpp"
#include "bddl/geometry.hpp"
#include "bddl/property.hpp"
#include "bddl/rng.hpp"

namespace bddl {

class KnowledgeBase;

class WorldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class JointType { Prismatic, Revolute };

struct Joint {
  std::string name;
  JointType type = JointType::Prismatic;
  double lower = 0.0;
  double upper = 0.0;
  double value = 0.0;
  bool relevant = true;
  double link_radius = 0.5;  // m; converts revolute travel into link displacement

  // A joint is open once it sits 5% of its range above the lower limit.
  double open_threshold() const { return lower + 0.05 * (upper - lower); }
  double displacement(double from, double to) const;

  friend bool operator==(const Joint&, const Joint&) = default;
};

// Inner box of a fillable object, relative to the object's center.
struct ContainerVolume {
  Vec3 offset;
  Vec3 half_extents;

  friend bool operator==(const ContainerVolume&, const ContainerVolume&) = default;
};

struct ObjectState {
  std::string id;
  std::string synset;
  bool real = true;
  bool placed = true;     // false while instantiation has not positioned it
  bool fixed = false;     // scene fixture; cannot be picked
  bool is_floor = false;  // support surface of a room
  bool sliced_half = false;

  Vec3 position;  // box center, m
  double yaw = 0.0;
  Vec3 half_extents{0.05, 0.05, 0.05};
  std::vector<Joint> joints;
  std::set<std::string> connected_to;

  double temperature = 23.0;
  double max_temperature = 23.0;
  std::map<std::string, int> soaked;   // liquid synset -> absorbed particles
  std::map<std::string, int> covered;  // visual substance synset -> level
  bool toggled_on = false;
  bool sliced = false;
  bool broken = false;

  std::vector<Vec3> cloth_keypoints;  // relative to position
  std::optional<double> fold_threshold;
  std::optional<double> unfold_threshold;
  std::optional<ContainerVolume> container;
  std::optional<Vec3> source_point;  // emitter, relative to position
  std::optional<Vec3> sink_point;    // drain, relative to position
  std::optional<Vec3> toggle_point;  // toggling region, relative to position
  std::optional<std::string> insource;
  std::vector<std::pair<std::string, std::string>> assembly_pairs;
  std::vector<std::string> replaced_by;

  // Fractional per-step rate budgets; keep accumulation deterministic.
  std::map<std::string, double> absorb_credit;
  double emit_credit = 0.0;

  Aabb box() const { return Aabb::from_center(position, rotated_half_extents(half_extents, yaw)); }
  std::optional<Aabb> container_box() const;
  bool spatial() const { return real && placed; }

  friend bool operator==(const ObjectState&, const ObjectState&) = default;
};

struct Particle {
  Vec3 position;
  double temperature = 23.0;

  friend bool operator==(const Particle&, const Particle&) = default;
};

struct ParticleSystem {
  std::string synset;
  SubstanceKind kind = SubstanceKind::Liquid;
  double particle_volume = 1e-5;  // m^3 per particle
  double base_temperature = 23.0;
  std::vector<Particle> particles;

  friend bool operator==(const ParticleSystem&, const ParticleSystem&) = default;
};

struct Room {
  std::string id;
  std::string type;
  std::vector<Rect> rects;

  bool contains(double x, double y) const;
  friend bool operator==(const Room&, const Room&) = default;
};

inline constexpr std::string_view kAgentId = "agent";

struct AgentState {
  double heading = 0.0;  // rad, about +z
  std::optional<std::string> held;
  double reach = 2.0;    // m

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

// Constants of the box world: heat and absorption rates, contact tolerances,
// agent kinematics.
struct WorldConfig {
  double ambient_temperature = 23.0;   // C
  double k_heat = 0.04;                // 1/s
  double k_ambient = 0.02;             // 1/s
  double heat_radius = 0.5;            // m beyond the source box
  double contact_epsilon = 0.005;      // m
  double particle_contact = 0.015;     // m, particle-to-surface contact distance
  double absorb_rate = 20.0;           // particles/s
  double emit_rate = 50.0;             // particles/s
  double liquid_particle_volume = 1e-5;  // m^3 (10 ml)
  double next_to_factor = 0.5;
  int sample_attempts = 100;
  double fov_half_angle = 0.7853981633974483;  // rad (90 degree cone)
  double fov_range = 5.0;              // m
  double base_speed = 0.5;             // m/s
  double manipulation_duration = 3.0;  // s
  double standoff = 0.6;               // m from the target footprint
  Vec3 agent_half_extents{0.2, 0.2, 0.6};

  friend bool operator==(const WorldConfig&, const WorldConfig&) = default;
};

struct WorldState {
  std::map<std::string, ObjectState> objects;
  std::map<std::string, ParticleSystem> substances;
  std::vector<Room> rooms;
  AgentState agent;
  double clock = 0.0;
  Rng rng;
  WorldConfig config;
  std::map<std::string, int> fresh_counters;  // per synset, for generated ids

  ObjectState& object(std::string_view id);
  const ObjectState& object(std::string_view id) const;
  const ObjectState* find(std::string_view id) const;
  ObjectState* find(std::string_view id);
  bool has_object(std::string_view id) const { return find(id) != nullptr; }

  ObjectState& agent_object() { return object(kAgentId); }
  const ObjectState& agent_object() const { return object(kAgentId); }
  Vec3 agent_position() const { return agent_object().position; }

  const Room* room_at(double x, double y) const;
  ParticleSystem& system(const std::string& synset, SubstanceKind kind);

  // Fresh id "<synset>_<k>" not colliding with any existing id.
  std::string fresh_id(const std::string& synset);

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

struct RayHit {
  std::string id;
  double distance = 0.0;
};

// Real, placed objects whose boxes the ray hits, nearest first (ties by id),
// excluding `exclude`. The direction is normalized internally.
std::vector<RayHit> ray_query(const WorldState& world, Vec3 origin, Vec3 direction,
                              std::string_view exclude = {});

// The eight x-y directions at 45 degree increments.
const std::array<Vec3, 8>& horizontal_directions();

bool in_contact(const WorldState& world, const ObjectState& a, const ObjectState& b);

// Serialization. Scene documents use the same schema; extended fields are
// optional on input. `warnings` collects non-fatal findings.
WorldState load_scene(const nlohmann::json& doc, const KnowledgeBase& kb, DiagnosticList* warnings = nullptr);
WorldState load_scene_file(const std::string& path, const KnowledgeBase& kb, DiagnosticList* warnings = nullptr);
nlohmann::json world_to_json(const WorldState& world);
// Restores a snapshot without kb checks (the inverse of world_to_json).
WorldState world_from_json(const nlohmann::json& doc);

// Container volume, an openable prismatic joint, and toggle/source points
// derived from the synset's properties and the object's half extents.
void apply_default_features(const KnowledgeBase& kb, ObjectState& o);

// Creates a real, unplaced object for `synset` with kb default geometry.
ObjectState make_default_object(const KnowledgeBase& kb, std::string id, const std::string& leaf_synset,
                                double ambient);

struct ContactOutcome {
  bool sliced = false;
  bool broken = false;
  bool toggled = false;
  std::vector<std::string> created;
};

// Contact of `tool` against `target` with the given force (N). Slicing and
// breaking replace the target with halves / fragments that inherit its
// extended states; the original stays as a non-real record with the flag set.
ContactOutcome apply_contact_event(WorldState& world, const KnowledgeBase& kb, std::string_view tool,
                                   std::string_view target, double force);

// Half-replacement shared by the contact event and the Sliced sampler.
std::vector<std::string> slice_object(WorldState& world, const KnowledgeBase& kb, std::string_view target);
std::vector<std::string> break_object(WorldState& world, const KnowledgeBase& kb, std::string_view target);

}  // namespace bddl
