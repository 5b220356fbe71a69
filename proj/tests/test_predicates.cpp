#include <gtest/gtest.h>

#include "bddl/predicates.hpp"
#include "support.hpp"

using namespace bddl;
using namespace bddl::testing;

namespace {

bool holds(const WorldState& w, Predicate p, std::vector<std::string> args) { return check(w, fixture_kb(), p, args); }

SampleResult draw(WorldState& w, Predicate p, std::vector<std::string> args, bool desired, SampleOptions o = {}) {
  return sample(w, fixture_kb(), p, args, desired, o);
}

}  // namespace

TEST(Registry, CoversEveryPredicateInOrder) {
  auto reg = predicate_registry();
  ASSERT_EQ(reg.size(), predicate_specs().size());
  for (std::size_t i = 0; i < reg.size(); ++i) {
    EXPECT_EQ(reg[i].id, predicate_specs()[i].id);
    EXPECT_TRUE(reg[i].checkable);
  }
  EXPECT_TRUE(sampleable(Predicate::OnTopOf, true));
  EXPECT_FALSE(sampleable(Predicate::OnTopOf, false));
  EXPECT_TRUE(sampleable(Predicate::Cooked, false));
  EXPECT_FALSE(sampleable(Predicate::InReachOfAgent, true));
  EXPECT_FALSE(sampleable(Predicate::NextTo, true));
}

TEST(Check, CookedWindow) {
  WorldState w = empty_room();
  add_object(w, "crab", "crab.n.05", on_floor("crab.n.05", 2, 2)).max_temperature = 70.0;
  EXPECT_TRUE(holds(w, Predicate::Cooked, {"crab"}));
  EXPECT_FALSE(holds(w, Predicate::Burnt, {"crab"}));
  w.object("crab").max_temperature = 62.0;
  EXPECT_FALSE(holds(w, Predicate::Cooked, {"crab"}));
  w.object("crab").max_temperature = fixture_kb().parameters("crab.n.05").burnt_temperature;
  EXPECT_FALSE(holds(w, Predicate::Cooked, {"crab"}));
  EXPECT_TRUE(holds(w, Predicate::Burnt, {"crab"}));
}

TEST(Check, JointAtLowerLimitIsClosed) {
  WorldState w = empty_room();
  auto& cab = add_object(w, "cabinet", "cabinet.n.01", on_floor("cabinet.n.01", 3, 3));
  ASSERT_FALSE(cab.joints.empty());
  EXPECT_FALSE(holds(w, Predicate::Open, {"cabinet"}));
  EXPECT_TRUE(holds(w, Predicate::Closed, {"cabinet"}));
  auto& j = w.object("cabinet").joints[0];
  j.value = j.open_threshold();
  EXPECT_FALSE(holds(w, Predicate::Open, {"cabinet"}));
  j.value = j.open_threshold() + 1e-3;
  EXPECT_TRUE(holds(w, Predicate::Open, {"cabinet"}));
  EXPECT_FALSE(holds(w, Predicate::Closed, {"cabinet"}));
}

TEST(Check, InsideCabinetAndOutside) {
  WorldState w = empty_room();
  add_object(w, "cabinet", "cabinet.n.01", on_floor("cabinet.n.01", 3, 3));
  add_object(w, "pumpkin", "pumpkin.n.02", {3, 3, 0.2});
  EXPECT_TRUE(holds(w, Predicate::InsideOf, {"pumpkin", "cabinet"}));
  w.object("pumpkin").position.x += 1.0;
  EXPECT_FALSE(holds(w, Predicate::InsideOf, {"pumpkin", "cabinet"}));
}

TEST(Check, ReachDistance) {
  WorldState w = empty_room(6, 6);
  w.agent_object().position = {0, 0, 0.6};
  add_object(w, "bottle", "bottle.n.01", on_floor("bottle.n.01", 1.5, 0));
  EXPECT_TRUE(holds(w, Predicate::InReachOfAgent, {"bottle"}));
  w.object("bottle").position.x = 2.5;
  EXPECT_FALSE(holds(w, Predicate::InReachOfAgent, {"bottle"}));
}

TEST(Check, OnTopNextToUnderOnFloor) {
  WorldState w = empty_room();
  add_object(w, "table", "table.n.02", on_floor("table.n.02", 3, 3));
  add_object(w, "cup", "cup.n.01", {3, 3, 0.76 + 0.05});
  add_object(w, "plate", "tray.n.01", on_floor("tray.n.01", 3.8, 3));
  EXPECT_TRUE(holds(w, Predicate::OnTopOf, {"cup", "table"}));
  EXPECT_FALSE(holds(w, Predicate::OnTopOf, {"table", "cup"}));
  EXPECT_TRUE(holds(w, Predicate::OnFloor, {"table", "floor_kitchen_0"}));
  EXPECT_FALSE(holds(w, Predicate::OnFloor, {"cup", "floor_kitchen_0"}));
  EXPECT_TRUE(holds(w, Predicate::NextTo, {"plate", "table"}));
  EXPECT_TRUE(holds(w, Predicate::InContactWith, {"cup", "table"}));
  w.object("cup").position.z += 0.1;
  EXPECT_FALSE(holds(w, Predicate::OnTopOf, {"cup", "table"}));
  add_object(w, "shelf_top", "tray.n.01", {1, 1, 1.0});
  add_object(w, "box", "pumpkin.n.02", on_floor("pumpkin.n.02", 1, 1));
  EXPECT_TRUE(holds(w, Predicate::Under, {"box", "shelf_top"}));
}

TEST(Check, NonRealObjectsOnlyAnswerExistence) {
  WorldState w = empty_room();
  add_object(w, "cookie", "sugar_cookie.n.01", on_floor("sugar_cookie.n.01", 1, 1)).real = false;
  add_object(w, "sheet", "cookie_sheet.n.01", on_floor("cookie_sheet.n.01", 1, 1));
  EXPECT_FALSE(holds(w, Predicate::Real, {"cookie"}));
  EXPECT_TRUE(holds(w, Predicate::Future, {"cookie"}));
  EXPECT_FALSE(holds(w, Predicate::OnTopOf, {"cookie", "sheet"}));
  EXPECT_FALSE(holds(w, Predicate::Cooked, {"cookie"}));
}

TEST(Check, ThermalThresholds) {
  WorldState w = empty_room();
  auto& t = add_object(w, "turkey", "turkey.n.01", on_floor("turkey.n.01", 2, 2));
  t.temperature = -5.0;
  EXPECT_TRUE(holds(w, Predicate::Frozen, {"turkey"}));
  w.object("turkey").temperature = 75.0;
  EXPECT_TRUE(holds(w, Predicate::Heated, {"turkey"}));
  EXPECT_THROW(holds(w, Predicate::OnFire, {"turkey"}), PredicateError);
  add_object(w, "candle", "candle.n.01", on_floor("candle.n.01", 3, 3)).temperature = 299.0;
  EXPECT_FALSE(holds(w, Predicate::OnFire, {"candle"}));
  w.object("candle").temperature = 300.0;
  EXPECT_TRUE(holds(w, Predicate::OnFire, {"candle"}));
}

TEST(Check, ErrorsOnMisuse) {
  WorldState w = empty_room();
  add_object(w, "pumpkin", "pumpkin.n.02", on_floor("pumpkin.n.02", 2, 2));
  EXPECT_THROW(holds(w, Predicate::ToggledOn, {"pumpkin"}), PredicateError);
  EXPECT_THROW(holds(w, Predicate::OnTopOf, {"pumpkin"}), PredicateError);
  EXPECT_THROW(holds(w, Predicate::Cooked, {"ghost"}), PredicateError);
}

TEST(Check, SubstanceInstancesResolveToSynset) {
  const auto& kb = fixture_kb();
  EXPECT_EQ(substance_key(kb, "water.n.06_1"), "water.n.06");
  EXPECT_EQ(substance_key(kb, "water.n.06"), "water.n.06");
  WorldState w = empty_room();
  auto& rag = add_object(w, "rag", "rag.n.01", on_floor("rag.n.01", 2, 2));
  rag.soaked["water.n.06"] = 50;
  EXPECT_TRUE(holds(w, Predicate::Soaked, {"rag", "water.n.06_1"}));
  w.object("rag").soaked["water.n.06"] = 49;
  EXPECT_FALSE(holds(w, Predicate::Soaked, {"rag", "water.n.06_1"}));
  EXPECT_TRUE(holds(w, Predicate::Real, {"water.n.06_1"}));
}

TEST(Sample, FrozenDrawsFromRange) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    WorldState w = empty_room(6, 6, seed);
    add_object(w, "turkey", "turkey.n.01", on_floor("turkey.n.01", 2, 2));
    ASSERT_TRUE(draw(w, Predicate::Frozen, {"turkey"}, true));
    double t = w.object("turkey").temperature;
    EXPECT_GE(t, -50.0);
    EXPECT_LE(t, -10.0);
  }
}

TEST(Sample, CookedFalseClampsMaxTemperature) {
  WorldState w = empty_room();
  add_object(w, "crab", "crab.n.05", on_floor("crab.n.05", 2, 2)).max_temperature = 100.0;
  ASSERT_TRUE(draw(w, Predicate::Cooked, {"crab"}, false));
  EXPECT_EQ(w.object("crab").max_temperature, 62.0);
}

TEST(Sample, OnTopOfTableAlwaysChecks) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    WorldState w = empty_room(6, 6, seed);
    add_object(w, "table", "table.n.02", on_floor("table.n.02", 3, 3));
    add_object(w, "plate", "tray.n.01", {0, 0, 0}).placed = false;
    auto r = draw(w, Predicate::OnTopOf, {"plate", "table"}, true);
    ASSERT_TRUE(r) << "seed " << seed << ": " << r.message;
    ASSERT_TRUE(holds(w, Predicate::OnTopOf, {"plate", "table"})) << "seed " << seed;
  }
}

TEST(Sample, ImpossibleContainmentFailsAndRollsBack) {
  WorldState w = empty_room();
  add_object(w, "jar", "mason_jar.n.01", on_floor("mason_jar.n.01", 3, 3));
  add_object(w, "pumpkin", "pumpkin.n.02", on_floor("pumpkin.n.02", 1, 1));
  WorldState before = w;
  auto r = draw(w, Predicate::InsideOf, {"pumpkin", "jar"}, true);
  EXPECT_FALSE(r);
  EXPECT_EQ(w.objects, before.objects);
}

TEST(Sample, ClosedContainerRefusesAccess) {
  WorldState w = empty_room();
  add_object(w, "cabinet", "cabinet.n.01", on_floor("cabinet.n.01", 3, 3));
  add_object(w, "pumpkin", "pumpkin.n.02", {0, 0, 0}).placed = false;
  SampleOptions strict;
  strict.require_access = true;
  EXPECT_FALSE(draw(w, Predicate::InsideOf, {"pumpkin", "cabinet"}, true, strict));
  ASSERT_TRUE(draw(w, Predicate::Open, {"cabinet"}, true));
  EXPECT_TRUE(draw(w, Predicate::InsideOf, {"pumpkin", "cabinet"}, true, strict));
  EXPECT_TRUE(holds(w, Predicate::InsideOf, {"pumpkin", "cabinet"}));
}

TEST(Sample, UnsampleablePolarityThrows) {
  WorldState w = empty_room();
  add_object(w, "table", "table.n.02", on_floor("table.n.02", 3, 3));
  add_object(w, "cup", "cup.n.01", on_floor("cup.n.01", 1, 1));
  EXPECT_THROW(draw(w, Predicate::OnTopOf, {"cup", "table"}, false), PredicateError);
  EXPECT_THROW(draw(w, Predicate::InReachOfAgent, {"cup"}, true), PredicateError);
  EXPECT_THROW(draw(w, Predicate::ToggledOn, {"cup"}, true), PredicateError);
}

TEST(Sample, FilledThenEmpty) {
  WorldState w = empty_room();
  add_object(w, "bucket", "bucket.n.01", on_floor("bucket.n.01", 2, 2));
  ASSERT_TRUE(draw(w, Predicate::Filled, {"bucket", "water.n.06"}, true));
  EXPECT_TRUE(holds(w, Predicate::Filled, {"bucket", "water.n.06"}));
  EXPECT_FALSE(holds(w, Predicate::Empty, {"bucket", "water.n.06"}));
  ASSERT_TRUE(draw(w, Predicate::Empty, {"bucket", "water.n.06"}, true));
  EXPECT_TRUE(holds(w, Predicate::Empty, {"bucket", "water.n.06"}));
}

TEST(Sample, SlicedReplacesObject) {
  WorldState w = empty_room();
  add_object(w, "apple", "apple.n.01", on_floor("apple.n.01", 2, 2));
  ASSERT_TRUE(draw(w, Predicate::Sliced, {"apple"}, true));
  EXPECT_TRUE(holds(w, Predicate::Sliced, {"apple"}));
  EXPECT_FALSE(holds(w, Predicate::Real, {"apple"}));
  EXPECT_FALSE(draw(w, Predicate::Sliced, {"apple"}, false));
}
