#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "bddl/predicates.hpp"
#include "bddl/transitions.hpp"
#include "support.hpp"

using namespace bddl;
using namespace bddl::testing;

namespace {

WorldState loaded_blender() { return load_scene_file(data_path("worlds/loaded_blender.json"), fixture_kb()); }

std::size_t count_rule(const std::vector<RuleInstance>& v, const std::string& id) {
  return std::count_if(v.begin(), v.end(), [&](const RuleInstance& r) { return r.rule_id == id; });
}

}  // namespace

TEST(Transitions, SlushieMatchesInToggledOnBlender) {
  WorldState w = loaded_blender();
  auto m = match_rules(w, fixture_kb());
  ASSERT_EQ(count_rule(m, "make_strawberry_slushie"), 1u);
  EXPECT_EQ(m[0].machine, "blender_0");
  EXPECT_EQ(m[0].objects, (std::vector<std::string>{"strawberry_0", "ice_0"}));
  EXPECT_EQ(m[0].substances, (std::vector<std::string>{"lemon_juice.n.01", "agave.n.01"}));
  EXPECT_TRUE(m[0].trigger.toggled_on);
}

TEST(Transitions, NoMatchWhenOffOrIncomplete) {
  WorldState off = loaded_blender();
  off.object("blender_0").toggled_on = false;
  EXPECT_EQ(count_rule(match_rules(off, fixture_kb()), "make_strawberry_slushie"), 0u);

  WorldState outside = loaded_blender();
  outside.object("ice_0").position = {3.0, 3.0, 0.015};
  EXPECT_EQ(count_rule(match_rules(outside, fixture_kb()), "make_strawberry_slushie"), 0u);

  WorldState dry = loaded_blender();
  dry.substances.erase("agave.n.01");
  EXPECT_EQ(count_rule(match_rules(dry, fixture_kb()), "make_strawberry_slushie"), 0u);
}

TEST(Transitions, ApplyingSlushieConsumesInputs) {
  WorldState w = loaded_blender();
  auto m = match_rules(w, fixture_kb());
  ASSERT_FALSE(m.empty());
  auto app = apply_rule(w, fixture_kb(), m[0]);
  EXPECT_EQ(app.consumed, (std::vector<std::string>{"strawberry_0", "ice_0"}));
  ASSERT_EQ(app.produced.size(), 1u);
  EXPECT_EQ(app.particles_removed, 3u);
  const std::string smoothie = app.produced[0];
  EXPECT_EQ(w.object(smoothie).synset, "smoothie.n.01");
  std::vector<std::string> args{smoothie, "blender_0"};
  EXPECT_TRUE(check(w, fixture_kb(), Predicate::InsideOf, args));
  EXPECT_FALSE(w.has_object("strawberry_0") && w.object("strawberry_0").real);
  EXPECT_TRUE(w.substances["lemon_juice.n.01"].particles.empty());
  EXPECT_THROW(apply_rule(w, fixture_kb(), m[0]), TransitionError);
}

TEST(Transitions, DoughInHotOvenMatchesBakeRule) {
  WorldState w = empty_room();
  add_object(w, "oven", "oven.n.01", on_floor("oven.n.01", 3, 3));
  add_object(w, "dough", "sugar_cookie_dough.n.01", {3, 3, 0.15});
  EXPECT_EQ(count_rule(match_rules(w, fixture_kb()), "bake_sugar_cookies"), 0u);
  w.object("oven").toggled_on = true;
  EXPECT_EQ(interior_temperature(w, fixture_kb(), w.object("oven")), 180.0);
  auto m = match_rules(w, fixture_kb());
  ASSERT_EQ(count_rule(m, "bake_sugar_cookies"), 1u);
  auto app = apply_rule(w, fixture_kb(), m[0]);
  EXPECT_EQ(app.produced.size(), 6u);
}

TEST(Transitions, BakeRuleRealizesFutureCookies) {
  WorldState w = empty_room();
  add_object(w, "oven", "oven.n.01", on_floor("oven.n.01", 3, 3)).toggled_on = true;
  add_object(w, "dough", "sugar_cookie_dough.n.01", {3, 3, 0.15});
  for (int i = 1; i <= 6; ++i) {
    std::string id = "sugar_cookie.n.01_" + std::to_string(i);
    auto o = make_default_object(fixture_kb(), id, "sugar_cookie.n.01", 23.0);
    o.real = false;
    w.objects.emplace(id, o);
  }
  auto app = apply_rule(w, fixture_kb(), match_rules(w, fixture_kb()).at(0));
  ASSERT_EQ(app.produced.size(), 6u);
  for (int i = 1; i <= 6; ++i) EXPECT_TRUE(w.object("sugar_cookie.n.01_" + std::to_string(i)).real);
}

TEST(Cleaning, SolventGateBlocksDryRemover) {
  WorldState w = empty_room();
  add_object(w, "wall", "table.n.02", on_floor("table.n.02", 3, 3)).covered["paint.n.01"] = 60;
  add_object(w, "brush", "scrub_brush.n.01", {3, 3, 0.76 + 0.03});
  auto effects = apply_cleaning(w, fixture_kb(), "brush", "wall");
  ASSERT_EQ(effects.size(), 1u);
  EXPECT_FALSE(effects[0].allowed);
  EXPECT_EQ(w.object("wall").covered["paint.n.01"], 60);

  w.object("brush").soaked["acetone.n.01"] = 50;
  effects = apply_cleaning(w, fixture_kb(), "brush", "wall", w.object("wall").box());
  ASSERT_EQ(effects.size(), 1u);
  EXPECT_TRUE(effects[0].allowed);
  EXPECT_FALSE(check(w, fixture_kb(), Predicate::Covered, std::vector<std::string>{"wall", "paint.n.01"}));
}

TEST(Cleaning, RustClassNeedsAbrasive) {
  WorldState w = empty_room();
  add_object(w, "iron", "iron.n.04", on_floor("iron.n.04", 2, 2)).covered["tarnish.n.02"] = 50;
  add_object(w, "rag", "rag.n.01", {2, 2, 0.14 + 0.005});
  auto effects = apply_cleaning(w, fixture_kb(), "rag", "iron", w.object("iron").box());
  EXPECT_FALSE(effects.at(0).allowed);
  EXPECT_EQ(w.object("iron").covered["tarnish.n.02"], 50);
  add_object(w, "paper", "emery_paper.n.01", {2, 2, 0.14 + 0.002});
  effects = apply_cleaning(w, fixture_kb(), "paper", "iron", w.object("iron").box());
  EXPECT_TRUE(effects.at(0).allowed);
  EXPECT_EQ(w.object("iron").covered.count("tarnish.n.02") ? w.object("iron").covered["tarnish.n.02"] : 0, 0);
}

TEST(Cleaning, SoakedRagReducesDust) {
  WorldState w = empty_room();
  add_object(w, "dryer", "dryer.n.01", on_floor("dryer.n.01", 3, 3)).covered["dust.n.01"] = 80;
  auto& rag = add_object(w, "rag", "rag.n.01", {3, 3, 0.9 + 0.005});
  rag.soaked["water.n.06"] = 50;
  rag.half_extents = {0.05, 0.05, 0.005};
  auto effects = apply_cleaning(w, fixture_kb(), "rag", "dryer");
  ASSERT_EQ(effects.size(), 1u);
  EXPECT_TRUE(effects[0].allowed);
  EXPECT_GT(effects[0].removed, 0u);
  EXPECT_LT(w.object("dryer").covered["dust.n.01"], 80);
}

TEST(Cleaning, RejectsNonRemoversAndDistantRemovers) {
  WorldState w = empty_room();
  add_object(w, "table", "table.n.02", on_floor("table.n.02", 3, 3)).covered["dust.n.01"] = 60;
  add_object(w, "cup", "cup.n.01", {3, 3, 0.81});
  add_object(w, "rag", "rag.n.01", on_floor("rag.n.01", 1, 1));
  EXPECT_THROW(apply_cleaning(w, fixture_kb(), "cup", "table"), TransitionError);
  EXPECT_THROW(apply_cleaning(w, fixture_kb(), "rag", "table"), TransitionError);
}
