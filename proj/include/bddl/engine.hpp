#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bddl/activity.hpp"
#include "bddl/goal.hpp"
#include "bddl/kb.hpp"
#include "bddl/world.hpp"

namespace bddl {

class InstantiationError : public std::runtime_error {
 public:
  InstantiationError(const std::string& message, std::string literal = {})
      : std::runtime_error(message), literal_(std::move(literal)) {}
  const std::string& literal() const { return literal_; }

 private:
  std::string literal_;
};

struct LiteralAttempts {
  std::string literal;  // serialized init literal
  int attempts = 0;     // sampler draws, summed over backtracking
  bool sampled = false; // false when the literal already held

  friend bool operator==(const LiteralAttempts&, const LiteralAttempts&) = default;
};

struct Instantiation {
  WorldState world;
  Grounding grounding;
  std::vector<LiteralAttempts> attempts;
  int restarts = 0;
};

struct InstantiateOptions {
  int budget = 100;          // full restarts
  int local_failures = 10;   // backtracking steps before a full restart
};

// Binds inroom fixtures, creates the remaining instances, samples the init
// literals (kinematic, then substance, then state) and re-checks all of them.
// Throws InstantiationError naming the failing literal.
Instantiation instantiate_activity(const ActivityDefinition& def, const WorldState& scene, const KnowledgeBase& kb,
                                   std::uint64_t seed, const InstantiateOptions& options = {});

enum class PrimitiveKind { Navigate, Pick, Place, Push, Dip, Wipe };

std::string_view primitive_name(PrimitiveKind kind);
std::optional<PrimitiveKind> parse_primitive_kind(std::string_view name);

struct Primitive {
  PrimitiveKind kind = PrimitiveKind::Navigate;
  std::string target;                  // object id or definition instance
  std::optional<Predicate> relation;   // place: OnTopOf or InsideOf
  bool open = true;                    // push: toward the upper limit

  friend bool operator==(const Primitive&, const Primitive&) = default;
};

struct PrimitiveOutcome {
  bool ok = false;
  std::string message;
  double path_length = 0.0;  // m
  double duration = 0.0;     // s
};

// Executes one primitive and, on success, steps the world for its duration
// in chunks of `dt`. Failed primitives change nothing and take no time.
PrimitiveOutcome execute_primitive(WorldState& world, const KnowledgeBase& kb, const Grounding& grounding,
                                   const Primitive& primitive, double dt = 1.0 / 60.0);

struct Displacement {
  std::string id;
  Vec3 from;
  Vec3 to;
  double joint_travel = 0.0;
};

struct TraceRecord {
  std::size_t index = 0;
  Primitive primitive;
  bool ok = false;
  std::string message;
  double path_length = 0.0;
  double duration = 0.0;
  std::vector<Displacement> moved;
  bool goal_satisfied = false;
  double q_score = 0.0;
};

struct EpisodeReport {
  bool success = false;
  double q_score = 0.0;
  double dist_nav = 0.0;
  double sim_time = 0.0;
  double kin_dis = 0.0;
  std::size_t primitive_count = 0;
  std::vector<TraceRecord> trace;
};

struct Metrics {
  double dist_nav = 0.0;
  double sim_time = 0.0;
  double kin_dis = 0.0;
};

double displacement_magnitude(const Displacement& d);

// Runs the script, stopping as soon as the goal holds.
EpisodeReport run_episode(WorldState& world, const KnowledgeBase& kb, const Grounding& grounding, const Formula& goal,
                          const std::vector<Primitive>& script, double dt = 1.0 / 60.0);

// Recomputes the efficiency metrics from the trace alone.
Metrics compute_metrics(const std::vector<TraceRecord>& trace);

// Documents.
nlohmann::json primitive_to_json(const Primitive& p);
Primitive primitive_from_json(const nlohmann::json& j);
std::vector<Primitive> script_from_json(const nlohmann::json& doc);
nlohmann::json script_to_json(const std::vector<Primitive>& script);
std::vector<Primitive> load_script_file(const std::string& path);
nlohmann::json grounding_to_json(const Grounding& g);
Grounding grounding_from_json(const nlohmann::json& j);
nlohmann::json report_to_json(const EpisodeReport& report);
std::vector<TraceRecord> trace_from_json(const nlohmann::json& j);

}  // namespace bddl
