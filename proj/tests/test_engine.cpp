#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "bddl/engine.hpp"
#include "bddl/predicates.hpp"
#include "bddl/validate.hpp"
#include "support.hpp"

using namespace bddl;
using namespace bddl::testing;

namespace {

Primitive prim(PrimitiveKind k, std::string target, std::optional<Predicate> rel = std::nullopt) {
  Primitive p;
  p.kind = k;
  p.target = std::move(target);
  p.relation = rel;
  return p;
}

void expect_init_holds(const Instantiation& inst, const ActivityDefinition& def) {
  auto canon = canonicalize(def, fixture_kb()).definition;
  for (const auto& lit : canon.init) {
    if (lit.predicate == Predicate::InRoom) continue;
    GroundLiteral g = lit;
    for (auto& a : g.args) {
      auto it = inst.grounding.instances.find(a);
      if (it != inst.grounding.instances.end()) a = it->second;
    }
    EXPECT_TRUE(check(inst.world, fixture_kb(), g)) << serialize_literal(lit);
  }
}

}  // namespace

TEST(Instantiate, LaundryRoomSatisfiesInit) {
  auto def = load_problem("clean_your_laundry_room");
  auto inst = instantiate_activity(def, load_scene_named("laundry_room"), fixture_kb(), 3);
  expect_init_holds(inst, def);
  EXPECT_EQ(inst.grounding.instances.at("washer.n.03_1"), "washer_0");
  EXPECT_EQ(inst.grounding.rooms.at("washer.n.03_1"), "laundry_room_0");
  const std::string rag = inst.grounding.instances.at("rag.n.01_1");
  const std::string dryer = inst.grounding.instances.at("dryer.n.01_1");
  EXPECT_TRUE(check(inst.world, fixture_kb(), Predicate::OnTopOf, std::vector<std::string>{rag, dryer}));

  // Make the three goal literals true and score the goal.
  WorldState w = inst.world;
  const std::string washer = inst.grounding.instances.at("washer.n.03_1");
  ASSERT_TRUE(sample(w, fixture_kb(), Predicate::Filled, std::vector<std::string>{washer, "vinegar.n.01"}, true));
  w.object(dryer).covered.erase("dust.n.01");
  w.object(washer).covered.erase("mold.n.05");
  // The problem writes (filled vinegar washer); the canonical form reorders it.
  const Formula goal = canonicalize(def, fixture_kb()).definition.goal;
  auto eval = evaluate_goal(w, fixture_kb(), inst.grounding, goal);
  EXPECT_TRUE(eval.satisfied);
  EXPECT_DOUBLE_EQ(eval.q_score, 1.0);
  auto before = evaluate_goal(inst.world, fixture_kb(), inst.grounding, goal);
  EXPECT_FALSE(before.satisfied);
  EXPECT_DOUBLE_EQ(before.q_score, 0.0);
}

TEST(Instantiate, EveryCorpusProblemInstantiates) {
  const std::pair<const char*, const char*> cases[] = {
      {"baking_sugar_cookies", "kitchen"},         {"clean_your_laundry_room", "laundry_room"},
      {"clean_the_bottom_of_an_iron", "utility_room"}, {"packing_lunch", "kitchen"},
      {"serving_hors_doeuvres", "kitchen"},        {"clean_table", "dining_kitchen"},
      {"collect_trash", "living_room"},            {"store_decoration", "living_room"}};
  for (const auto& [problem, scene] : cases) {
    auto def = load_problem(problem);
    auto inst = instantiate_activity(def, load_scene_named(scene), fixture_kb(), 11);
    expect_init_holds(inst, def);
  }
}

TEST(Instantiate, SeedsGiveDistinctValidWorlds) {
  auto def = load_problem("collect_trash");
  auto scene = load_scene_named("living_room");
  auto a = instantiate_activity(def, scene, fixture_kb(), 7);
  auto b = instantiate_activity(def, scene, fixture_kb(), 8);
  auto again = instantiate_activity(def, scene, fixture_kb(), 7);
  EXPECT_NE(world_to_json(a.world), world_to_json(b.world));
  EXPECT_EQ(world_to_json(a.world).dump(), world_to_json(again.world).dump());
  expect_init_holds(a, def);
  expect_init_holds(b, def);
}

TEST(Instantiate, FuturesStartNonReal) {
  auto def = load_problem("baking_sugar_cookies");
  auto inst = instantiate_activity(def, load_scene_named("kitchen"), fixture_kb(), 5);
  for (int i = 1; i <= 6; ++i) {
    const auto& id = inst.grounding.instances.at("sugar_cookie.n.01_" + std::to_string(i));
    EXPECT_FALSE(inst.world.object(id).real);
  }
}

TEST(Instantiate, ImpossibleContainmentNamesLiteral) {
  auto def = parse_problem_file(data_path("problems/invalid/oversized.bddl"));
  InstantiateOptions opt;
  opt.budget = 5;
  try {
    instantiate_activity(def, load_scene_named("kitchen"), fixture_kb(), 1, opt);
    FAIL() << "expected InstantiationError";
  } catch (const InstantiationError& e) {
    EXPECT_EQ(e.literal(), "(inside table.n.02_1 mason_jar.n.01_1)");
  }
}

TEST(Instantiate, RejectsInvalidDefinitionsAndMissingRooms) {
  auto bad = parse_problem_file(data_path("problems/invalid/substance_multiplicity.bddl"));
  EXPECT_THROW(instantiate_activity(bad, load_scene_named("kitchen"), fixture_kb(), 1), InstantiationError);
  auto laundry = load_problem("clean_your_laundry_room");
  EXPECT_THROW(instantiate_activity(laundry, load_scene_named("kitchen"), fixture_kb(), 1), InstantiationError);
}

TEST(Primitives, NavigationPathLength) {
  WorldState w = empty_room(10, 6);
  w.agent_object().position = {1.0, 3.0, 0.6};
  add_object(w, "box", "pumpkin.n.02", on_floor("pumpkin.n.02", 4.9, 3.0));
  auto out = execute_primitive(w, fixture_kb(), {}, prim(PrimitiveKind::Navigate, "box"));
  ASSERT_TRUE(out.ok) << out.message;
  EXPECT_NEAR(out.path_length, 3.0, 1e-12);
  EXPECT_NEAR(out.duration, 3.0 / w.config.base_speed, 1e-12);

  WorldState w2 = empty_room(10, 6);
  w2.agent_object().position = {1.0, 3.0, 0.6};
  add_object(w2, "a", "pumpkin.n.02", on_floor("pumpkin.n.02", 3.9, 3.0));
  add_object(w2, "b", "pumpkin.n.02", on_floor("pumpkin.n.02", 6.9, 3.0));
  auto g = load_problem("store_decoration").goal;
  auto report = run_episode(w2, fixture_kb(), {}, g,
                            {prim(PrimitiveKind::Navigate, "a"), prim(PrimitiveKind::Navigate, "b")});
  EXPECT_NEAR(report.dist_nav, 5.0, 1e-12);
  EXPECT_NEAR(report.trace[0].path_length, 2.0, 1e-12);
}

TEST(Primitives, PickRules) {
  WorldState w = empty_room();
  w.agent_object().position = {2.0, 2.0, 0.6};
  add_object(w, "cup", "cup.n.01", on_floor("cup.n.01", 3.0, 2.0));
  add_object(w, "bottle", "bottle.n.01", on_floor("bottle.n.01", 3.0, 2.3));
  add_object(w, "far", "bottle.n.01", on_floor("bottle.n.01", 5.5, 5.5));
  EXPECT_EQ(execute_primitive(w, fixture_kb(), {}, prim(PrimitiveKind::Pick, "far")).message, "far is out of reach");
  ASSERT_TRUE(execute_primitive(w, fixture_kb(), {}, prim(PrimitiveKind::Pick, "cup")).ok);
  EXPECT_EQ(w.agent.held, "cup");
  EXPECT_TRUE(check(w, fixture_kb(), Predicate::InHandOfAgent, std::vector<std::string>{"cup"}));
  WorldState before = w;
  auto again = execute_primitive(w, fixture_kb(), {}, prim(PrimitiveKind::Pick, "bottle"));
  EXPECT_FALSE(again.ok);
  EXPECT_EQ(again.message, "hand occupied");
  EXPECT_EQ(again.duration, 0.0);
  EXPECT_EQ(w, before);
}

TEST(Primitives, UnknownTargetFails) {
  WorldState w = empty_room();
  auto out = execute_primitive(w, fixture_kb(), {}, prim(PrimitiveKind::Navigate, "ghost"));
  EXPECT_FALSE(out.ok);
  EXPECT_EQ(w.clock, 0.0);
}

TEST(Episode, EmptyScriptReportsInitialState) {
  auto def = load_problem("collect_trash");
  auto inst = instantiate_activity(def, load_scene_named("living_room"), fixture_kb(), 2);
  auto report = run_episode(inst.world, fixture_kb(), inst.grounding, def.goal, {});
  EXPECT_FALSE(report.success);
  EXPECT_DOUBLE_EQ(report.q_score, 0.0);
  EXPECT_EQ(report.dist_nav, 0.0);
  EXPECT_EQ(report.sim_time, 0.0);
  EXPECT_EQ(report.kin_dis, 0.0);
  EXPECT_EQ(report.primitive_count, 0u);
}

TEST(Episode, StoreDecorationNeedsDrawerOpen) {
  auto def = load_problem("store_decoration");
  auto inst = instantiate_activity(def, load_scene_named("living_room"), fixture_kb(), 4);
  auto script = load_script_file(data_path("scripts/store_decoration.json"));
  auto no_push = load_script_file(data_path("scripts/store_decoration_no_push.json"));

  WorldState w1 = inst.world;
  auto ok = run_episode(w1, fixture_kb(), inst.grounding, def.goal, script);
  EXPECT_TRUE(ok.success);
  EXPECT_DOUBLE_EQ(ok.q_score, 1.0);
  // Opening the drawer moves its link by the full joint range.
  EXPECT_NEAR(ok.kin_dis, 0.3, 1e-12);

  WorldState w2 = inst.world;
  auto blocked = run_episode(w2, fixture_kb(), inst.grounding, def.goal, no_push);
  EXPECT_FALSE(blocked.success);
  bool closed_message = false;
  for (const auto& t : blocked.trace)
    if (!t.ok && t.message.find("is closed") != std::string::npos) closed_message = true;
  EXPECT_TRUE(closed_message);
}

TEST(Episode, MetricsFromTraceAgree) {
  auto def = load_problem("collect_trash");
  auto inst = instantiate_activity(def, load_scene_named("living_room"), fixture_kb(), 9);
  auto report =
      run_episode(inst.world, fixture_kb(), inst.grounding, def.goal, load_script_file(data_path("scripts/collect_trash.json")));
  EXPECT_TRUE(report.success);
  EXPECT_EQ(report.primitive_count, 16u);
  // Carried objects are excluded from disarrangement.
  EXPECT_EQ(report.kin_dis, 0.0);
  auto m = compute_metrics(report.trace);
  EXPECT_DOUBLE_EQ(m.dist_nav, report.dist_nav);
  EXPECT_DOUBLE_EQ(m.sim_time, report.sim_time);
  EXPECT_DOUBLE_EQ(m.kin_dis, report.kin_dis);
  auto parsed = trace_from_json(report_to_json(report).at("trace"));
  ASSERT_EQ(parsed.size(), report.trace.size());
  EXPECT_DOUBLE_EQ(compute_metrics(parsed).dist_nav, report.dist_nav);
}

TEST(Episode, ScriptDocuments) {
  auto script = load_script_file(data_path("scripts/clean_table.json"));
  ASSERT_EQ(script.size(), 6u);
  EXPECT_EQ(script_from_json(script_to_json(script)), script);
  EXPECT_THROW(script_from_json({{"primitives", nlohmann::json::array()}}), std::invalid_argument);
  EXPECT_THROW(primitive_from_json({{"kind", "fly"}, {"target", "x"}}), std::invalid_argument);
  EXPECT_THROW(primitive_from_json({{"kind", "place"}, {"target", "x"}}), std::invalid_argument);
}
