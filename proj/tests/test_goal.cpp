#include <gtest/gtest.h>

#include "bddl/goal.hpp"
#include "support.hpp"

using namespace bddl;
using namespace bddl::testing;

namespace {

Formula goal_of(const std::string& text) {
  return parse_problem("(define (problem p) (:domain omnigibson) (:objects agent.n.01_1 - agent.n.01) (:init) (:goal " +
                       text + "))")
      .goal;
}

GoalEvaluation evaluate(const WorldState& w, const Formula& f) { return evaluate_goal(w, fixture_kb(), {}, f); }

// Two trays on a counter with two sausages and two cherries, each group on
// its own tray.
WorldState serving_world() {
  WorldState w = empty_room();
  add_object(w, "countertop.n.01_1", "countertop.n.01", on_floor("countertop.n.01", 3, 3));
  add_object(w, "tray.n.01_1", "tray.n.01", {2.7, 3, 0.92});
  add_object(w, "tray.n.01_2", "tray.n.01", {3.3, 3, 0.92});
  add_object(w, "sausage.n.01_1", "sausage.n.01", {2.65, 3, 0.955});
  add_object(w, "sausage.n.01_2", "sausage.n.01", {2.75, 3.05, 0.955});
  add_object(w, "cherry.n.03_1", "cherry.n.03", {3.25, 3, 0.95});
  add_object(w, "cherry.n.03_2", "cherry.n.03", {3.35, 3, 0.95});
  return w;
}

}  // namespace

TEST(Matching, HopcroftKarp) {
  EXPECT_EQ(maximum_matching(0, {}), 0u);
  EXPECT_EQ(maximum_matching(3, {{0}, {0}, {0}}), 1u);
  EXPECT_EQ(maximum_matching(3, {{0, 1}, {0}, {1, 2}}), 3u);
  // Greedy left-to-right picks 0-0 and strands vertex 1; augmenting fixes it.
  EXPECT_EQ(maximum_matching(2, {{0, 1}, {0}}), 2u);
  EXPECT_EQ(maximum_matching(4, {{}, {}, {3}}), 1u);
}

TEST(Goal, ServingHorsDoeuvres) {
  Formula g = load_problem("serving_hors_doeuvres").goal;
  WorldState w = serving_world();
  auto good = evaluate(w, g);
  EXPECT_TRUE(good.satisfied);
  EXPECT_DOUBLE_EQ(good.q_score, 1.0);

  w.object("cherry.n.03_1").position = {2.7, 3.08, 0.95};
  auto bad = evaluate(w, g);
  EXPECT_FALSE(bad.satisfied);
  EXPECT_LT(bad.q_score, 1.0);
  EXPECT_GT(bad.q_score, 0.5);
}

TEST(Goal, FractionOfLeaves) {
  WorldState w = empty_room();
  add_object(w, "apple.n.01_1", "apple.n.01", on_floor("apple.n.01", 1, 1)).max_temperature = 80.0;
  auto r = evaluate(w, goal_of("(and (cooked ?apple.n.01_1) (sliced ?apple.n.01_1))"));
  EXPECT_FALSE(r.satisfied);
  EXPECT_DOUBLE_EQ(r.q_score, 0.5);
  auto full = evaluate(w, goal_of("(and (cooked ?apple.n.01_1))"));
  EXPECT_TRUE(full.satisfied);
  EXPECT_DOUBLE_EQ(full.q_score, 1.0);
}

TEST(Goal, DisjunctionPicksBestBranch) {
  WorldState w = empty_room();
  add_object(w, "apple.n.01_1", "apple.n.01", on_floor("apple.n.01", 1, 1)).max_temperature = 80.0;
  add_object(w, "apple.n.01_2", "apple.n.01", on_floor("apple.n.01", 2, 1));
  auto r = evaluate(w, goal_of("(or (and (cooked ?apple.n.01_1) (cooked ?apple.n.01_2) (sliced ?apple.n.01_1)) "
                               "(and (cooked ?apple.n.01_2) (sliced ?apple.n.01_2)))"));
  EXPECT_FALSE(r.satisfied);
  EXPECT_DOUBLE_EQ(r.q_score, 1.0 / 3.0);
}

TEST(Goal, QuantifiersOverDomains) {
  WorldState w = empty_room();
  for (int i = 1; i <= 3; ++i)
    add_object(w, "apple.n.01_" + std::to_string(i), "apple.n.01", on_floor("apple.n.01", i, 1)).max_temperature =
        i == 3 ? 23.0 : 80.0;
  auto all = evaluate(w, goal_of("(forall (?a - apple.n.01) (cooked ?a))"));
  EXPECT_FALSE(all.satisfied);
  EXPECT_DOUBLE_EQ(all.q_score, 2.0 / 3.0);
  auto any = evaluate(w, goal_of("(exists (?a - apple.n.01) (cooked ?a))"));
  EXPECT_TRUE(any.satisfied);
  EXPECT_DOUBLE_EQ(any.q_score, 1.0);
  // Ancestors quantify over every descendant leaf.
  auto fruit = evaluate(w, goal_of("(forall (?f - edible_fruit.n.01) (cooked ?f))"));
  EXPECT_DOUBLE_EQ(fruit.q_score, 2.0 / 3.0);
}

TEST(Goal, EmptyDomains) {
  WorldState w = empty_room();
  auto all = evaluate(w, goal_of("(forall (?a - apple.n.01) (cooked ?a))"));
  EXPECT_TRUE(all.satisfied);
  EXPECT_DOUBLE_EQ(all.q_score, 1.0);
  auto any = evaluate(w, goal_of("(exists (?a - apple.n.01) (cooked ?a))"));
  EXPECT_FALSE(any.satisfied);
  EXPECT_DOUBLE_EQ(any.q_score, 0.0);
}

TEST(Goal, ForNPairs) {
  WorldState w = serving_world();
  auto two = evaluate(w, goal_of("(for_n_pairs 2 (?s - sausage.n.01) (?t - tray.n.01) (ontop ?s ?t))"));
  EXPECT_FALSE(two.satisfied);
  EXPECT_DOUBLE_EQ(two.q_score, 0.5);
  auto one = evaluate(w, goal_of("(for_n_pairs 1 (?s - sausage.n.01) (?t - tray.n.01) (ontop ?s ?t))"));
  EXPECT_TRUE(one.satisfied);
  EXPECT_DOUBLE_EQ(one.q_score, 1.0);
  w.object("sausage.n.01_2").position = {3.3, 2.95, 0.955};
  auto moved = evaluate(w, goal_of("(for_n_pairs 2 (?s - sausage.n.01) (?t - tray.n.01) (ontop ?s ?t))"));
  EXPECT_TRUE(moved.satisfied);
  auto too_many = evaluate(w, goal_of("(for_n_pairs 3 (?s - sausage.n.01) (?t - tray.n.01) (ontop ?s ?t))"));
  EXPECT_FALSE(too_many.satisfied);
  EXPECT_DOUBLE_EQ(too_many.q_score, 0.0);
}

TEST(Goal, GroundingMapsInstancesToWorldIds) {
  WorldState w = empty_room();
  add_object(w, "apple_7", "apple.n.01", on_floor("apple.n.01", 1, 1)).max_temperature = 80.0;
  Grounding g;
  g.instances["apple.n.01_1"] = "apple_7";
  Formula f = goal_of("(cooked ?apple.n.01_1)");
  EXPECT_TRUE(goal_satisfied(w, fixture_kb(), g, f));
  EXPECT_FALSE(goal_satisfied(w, fixture_kb(), {}, f));
}

TEST(Goal, NormalizesBeforeScoring) {
  WorldState w = empty_room();
  add_object(w, "bucket.n.01_1", "bucket.n.01", on_floor("bucket.n.01", 1, 1));
  auto r = evaluate(w, goal_of("(not (filled ?bucket.n.01_1 ?water.n.06_1))"));
  EXPECT_TRUE(r.satisfied);
  EXPECT_DOUBLE_EQ(r.q_score, 1.0);
}
