#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bddl/engine.hpp"
#include "bddl/predicates.hpp"
#include "bddl/transitions.hpp"
#include "bddl/validate.hpp"

namespace bddl::cli {

namespace {

using json = nlohmann::json;

constexpr const char* kSampleSchema = "bddlkit.sample/1";

// Thrown for usage and I/O problems (exit 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string kb;
  std::string scene;
  std::string world;
  std::string script;
  std::string out;
  std::string problem;
  std::string synset;
  std::string atom;
  std::uint64_t seed = 0;
  int budget = 100;
  double dt = 1.0 / 60.0;
  int episodes = 1;
  int threads = 1;
  bool dry_run = false;
};

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw UsageError(std::string("missing ") + what);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw UsageError(std::string("cannot read ") + what + " " + path);
}

json read_json(const std::string& path, const char* what) {
  require_file(path, what);
  std::ifstream in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(path + " is not valid JSON: " + e.what());
  }
}

KnowledgeBase load_kb(const Options& o) {
  std::string path = o.kb;
  if (path.empty())
    if (const char* env = std::getenv("BDDLKIT_KB")) path = env;
  if (path.empty()) throw UsageError("no knowledge base: pass --kb or set BDDLKIT_KB");
  require_file(path, "kb");
  try {
    return KnowledgeBase::load_file(path);
  } catch (const KbError& e) {
    throw UsageError(e.what());
  }
}

ActivityDefinition load_problem(const std::string& path) {
  require_file(path, "problem");
  return parse_problem_file(path);
}

void emit(const Options& o, const json& doc, std::ostream& out) {
  std::string text = doc.dump(2) + "\n";
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + o.out);
  f << text;
}

json diagnostics_json(const DiagnosticList& list) {
  json arr = json::array();
  for (const auto& d : list)
    arr.push_back({{"severity", to_string(d.severity)},
                   {"code", d.code},
                   {"message", d.message},
                   {"line", d.location.line},
                   {"column", d.location.column}});
  return arr;
}

// A world document, or a sample document carrying a world and grounding.
std::pair<WorldState, Grounding> load_world(const std::string& path, const KnowledgeBase& kb) {
  json doc = read_json(path, "world");
  Grounding g;
  try {
    if (doc.value("schema", "") == kSampleSchema) {
      g = grounding_from_json(doc.at("grounding"));
      return {world_from_json(doc.at("world")), g};
    }
    return {load_scene(doc, kb), g};
  } catch (const std::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

json sample_json(const std::string& problem, std::uint64_t seed, const Instantiation& inst) {
  json attempts = json::array();
  for (const auto& a : inst.attempts)
    attempts.push_back({{"literal", a.literal}, {"attempts", a.attempts}, {"sampled", a.sampled}});
  return {{"schema", kSampleSchema},
          {"problem", problem},
          {"seed", seed},
          {"restarts", inst.restarts},
          {"literal_attempts", attempts},
          {"grounding", grounding_to_json(inst.grounding)},
          {"world", world_to_json(inst.world)}};
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  KnowledgeBase kb = load_kb(o);
  DiagnosticList diags;
  try {
    diags = validate_problem(load_problem(o.problem), kb);
  } catch (const ParseError& e) {
    diags.push_back({Severity::Error, "parse", e.bare_message(), e.location()});
  }
  for (const auto& d : diags) err << format(d) << "\n";
  emit(o, {{"schema", "bddlkit.diagnostics/1"}, {"problem", o.problem}, {"diagnostics", diagnostics_json(diags)}}, out);
  return has_errors(diags) ? 1 : 0;
}

int cmd_sample(const Options& o, std::ostream& out, std::ostream& err) {
  KnowledgeBase kb = load_kb(o);
  ActivityDefinition def = canonicalize(load_problem(o.problem), kb).definition;
  require_file(o.scene, "scene");
  WorldState scene = load_scene_file(o.scene, kb);
  try {
    Instantiation inst = instantiate_activity(def, scene, kb, o.seed, {o.budget, 10});
    emit(o, sample_json(def.problem_name, o.seed, inst), out);
    return 0;
  } catch (const InstantiationError& e) {
    err << "sampling failed: " << e.what() << "\n";
    emit(o, {{"schema", kSampleSchema}, {"problem", def.problem_name}, {"seed", o.seed}, {"error", e.what()},
             {"literal", e.literal()}},
         out);
    return 1;
  }
}

json run_one(const ActivityDefinition& def, const KnowledgeBase& kb, const WorldState& scene,
             const std::vector<Primitive>& script, std::uint64_t seed, const Options& o) {
  try {
    Instantiation inst = instantiate_activity(def, scene, kb, seed, {o.budget, 10});
    EpisodeReport r = run_episode(inst.world, kb, inst.grounding, def.goal, script, o.dt);
    return {{"seed", seed}, {"report", report_to_json(r)}};
  } catch (const InstantiationError& e) {
    return {{"seed", seed}, {"error", e.what()}};
  }
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
  KnowledgeBase kb = load_kb(o);
  ActivityDefinition def = canonicalize(load_problem(o.problem), kb).definition;
  json script_doc = read_json(o.script, "script");
  std::vector<Primitive> script;
  try {
    script = script_from_json(script_doc);
  } catch (const std::exception& e) {
    // Readable but malformed content is a diagnostic, like a problem that fails to parse.
    err << "error: script " << o.script << ": " << e.what() << "\n";
    return 1;
  }
  if (!(o.dt > 0.0)) throw UsageError("--dt must be positive");
  if (o.world.empty() == o.scene.empty()) throw UsageError("pass exactly one of --world or --scene");

  if (!o.world.empty()) {
    auto [world, grounding] = load_world(o.world, kb);
    EpisodeReport r = run_episode(world, kb, grounding, def.goal, script, o.dt);
    emit(o, report_to_json(r), out);
    return 0;
  }

  require_file(o.scene, "scene");
  WorldState scene = load_scene_file(o.scene, kb);
  if (o.episodes <= 1) {
    json one = run_one(def, kb, scene, script, o.seed, o);
    if (one.contains("error")) {
      err << "sampling failed: " << one["error"].get<std::string>() << "\n";
      emit(o, one, out);
      return 1;
    }
    emit(o, one["report"], out);
    return 0;
  }

  // Episodes are independent; results are stored by index so the document
  // does not depend on the thread count.
  std::vector<json> results(static_cast<std::size_t>(o.episodes));
  std::size_t workers = static_cast<std::size_t>(std::max(1, std::min(o.threads, o.episodes)));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < results.size(); i += workers)
        results[i] = run_one(def, kb, scene, script, o.seed + i, o);
    });
  for (auto& t : pool) t.join();
  std::size_t successes = 0;
  for (const auto& r : results)
    if (r.contains("report") && r["report"]["success"].get<bool>()) ++successes;
  err << successes << "/" << results.size() << " episodes succeeded\n";
  emit(o, {{"schema", "bddlkit.batch/1"}, {"episodes", results}, {"successes", successes}}, out);
  return 0;
}

int cmd_predicates(const Options& o, std::ostream& out) {
  json arr = json::array();
  for (const auto& spec : predicate_specs()) {
    const auto& reg = registry_entry(spec.id);
    json aliases = json::array();
    for (const auto& a : predicate_aliases())
      if (a.predicate == spec.id) aliases.push_back(a.alias);
    json row{{"name", spec.canonical},
             {"bddl", spec.bddl},
             {"arity", spec.arity},
             {"aliases", aliases},
             {"init_only", spec.init_only},
             {"sample_true", reg.sample_true},
             {"sample_false", reg.sample_false}};
    if (spec.requires_property) row["requires_property"] = property_name(*spec.requires_property);
    if (spec.complement) row["complement"] = canonical_name(*spec.complement);
    arr.push_back(row);
  }
  emit(o, {{"schema", "bddlkit.predicates/1"}, {"predicates", arr}}, out);
  return 0;
}

int cmd_properties(const Options& o, std::ostream& out, std::ostream& err) {
  KnowledgeBase kb = load_kb(o);
  if (!kb.contains(o.synset)) {
    err << "unknown synset " << o.synset << "\n";
    return 1;
  }
  json props = kb.infer_properties(o.synset).names();
  emit(o, {{"synset", o.synset}, {"leaf", kb.is_leaf(o.synset)}, {"properties", props}}, out);
  return 0;
}

int cmd_rules(const Options& o, std::ostream& out) {
  KnowledgeBase kb = load_kb(o);
  json doc = kb.to_json();
  json result{{"transition_rules", doc.value("transition_rules", json::array())}};
  if (o.dry_run) {
    if (o.world.empty()) throw UsageError("--dry-run needs a world");
    auto [world, grounding] = load_world(o.world, kb);
    json matches = json::array();
    for (const auto& m : match_rules(world, kb))
      matches.push_back({{"rule", m.rule_id},
                         {"machine", m.machine},
                         {"objects", m.objects},
                         {"substances", m.substances},
                         {"trigger",
                          {{"toggled_on", m.trigger.toggled_on},
                           {"temperature", m.trigger.temperature},
                           {"containment", m.trigger.contained}}}});
    result["matches"] = matches;
  }
  emit(o, result, out);
  return 0;
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  KnowledgeBase kb = load_kb(o);
  auto [world, grounding] = load_world(o.world, kb);
  GroundLiteral lit;
  try {
    lit = parse_literal(o.atom);
  } catch (const ParseError& e) {
    throw UsageError(std::string("cannot parse atom: ") + e.what());
  }
  std::vector<std::string> args;
  for (const auto& a : lit.args) {
    auto it = grounding.instances.find(a);
    args.push_back(it == grounding.instances.end() ? a : it->second);
  }
  try {
    bool value = check(world, kb, lit.predicate, args) == lit.positive;
    emit(o, {{"atom", serialize_literal(lit)}, {"value", value}}, out);
    return 0;
  } catch (const PredicateError& e) {
    err << e.what() << "\n";
    emit(o, {{"atom", serialize_literal(lit)}, {"error", e.what()}}, out);
    return 1;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"bddlkit: activity definitions, sampling and scripted episodes"};
  app.require_subcommand(1);
  Options o;
  auto add_kb = [&](CLI::App* c) { c->add_option("--kb", o.kb, "knowledge base JSON (default: $BDDLKIT_KB)"); };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "write the document here instead of stdout"); };

  auto* validate = app.add_subcommand("validate", "check a problem definition against the kb");
  validate->add_option("problem", o.problem)->required();
  add_kb(validate);
  add_out(validate);

  auto* sample_cmd = app.add_subcommand("sample", "instantiate a problem in a scene");
  sample_cmd->add_option("problem", o.problem)->required();
  sample_cmd->add_option("--scene", o.scene)->required();
  sample_cmd->add_option("--seed", o.seed);
  sample_cmd->add_option("--budget", o.budget, "full restarts before giving up");
  add_kb(sample_cmd);
  add_out(sample_cmd);

  auto* run_cmd = app.add_subcommand("run", "run a scripted episode");
  run_cmd->add_option("problem", o.problem)->required();
  run_cmd->add_option("--script", o.script)->required();
  run_cmd->add_option("--world", o.world, "world or sample snapshot");
  run_cmd->add_option("--scene", o.scene, "scene to instantiate with --seed");
  run_cmd->add_option("--seed", o.seed);
  run_cmd->add_option("--budget", o.budget);
  run_cmd->add_option("--dt", o.dt, "simulation step in seconds");
  run_cmd->add_option("--episodes", o.episodes, "seeded episodes seed..seed+N-1")->check(CLI::PositiveNumber);
  run_cmd->add_option("--threads", o.threads)->check(CLI::PositiveNumber);
  add_kb(run_cmd);
  add_out(run_cmd);

  auto* predicates = app.add_subcommand("predicates", "dump the predicate registry");
  add_out(predicates);

  auto* properties = app.add_subcommand("properties", "inferred properties of a synset");
  properties->add_option("synset", o.synset)->required();
  add_kb(properties);
  add_out(properties);

  auto* rules = app.add_subcommand("rules", "list transition rules");
  rules->add_flag("--dry-run", o.dry_run, "match the rules against a world");
  rules->add_option("world", o.world);
  add_kb(rules);
  add_out(rules);

  auto* check_cmd = app.add_subcommand("check", "evaluate one atom in a world");
  check_cmd->add_option("world", o.world)->required();
  check_cmd->add_option("atom", o.atom)->required();
  add_kb(check_cmd);
  add_out(check_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (*validate) return cmd_validate(o, out, err);
    if (*sample_cmd) return cmd_sample(o, out, err);
    if (*run_cmd) return cmd_run(o, out, err);
    if (*predicates) return cmd_predicates(o, out);
    if (*properties) return cmd_properties(o, out, err);
    if (*rules) return cmd_rules(o, out);
    if (*check_cmd) return cmd_check(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace bddl::cli
