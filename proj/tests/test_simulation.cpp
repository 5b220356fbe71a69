#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>

#include "bddl/predicates.hpp"
#include "bddl/simulation.hpp"
#include "support.hpp"

using namespace bddl;
using namespace bddl::testing;

namespace {

constexpr double kDt = 1.0 / 60.0;

bool holds(const WorldState& w, Predicate p, std::vector<std::string> args) { return check(w, fixture_kb(), p, args); }

}  // namespace

TEST(Simulation, AppleWarmsInToasterOven) {
  WorldState w = empty_room();
  add_object(w, "oven", "toaster_oven.n.01", on_floor("toaster_oven.n.01", 3, 3)).toggled_on = true;
  add_object(w, "apple", "apple.n.01", {3, 3, 0.07});
  double last = w.object("apple").temperature;
  bool cooked = false;
  for (int i = 0; i < 600; ++i) {
    step(w, fixture_kb(), kDt);
    double t = w.object("apple").temperature;
    ASSERT_GT(t, last);
    ASSERT_LT(t, 204.0);
    last = t;
    if (holds(w, Predicate::Cooked, {"apple"})) cooked = true;
    if (cooked) {
      EXPECT_GE(w.object("apple").max_temperature, 74.0);
    }
  }
  EXPECT_TRUE(cooked);
  // Closed form of the exponential relaxation.
  double expected = 204.0 + (23.0 - 204.0) * std::exp(-w.config.k_heat * 600 * kDt);
  EXPECT_NEAR(last, expected, 1e-6);
}

TEST(Simulation, NoSourcesRelaxToAmbient) {
  WorldState w = empty_room();
  auto& pot = add_object(w, "pot", "pot.n.01", on_floor("pot.n.01", 3, 3));
  pot.temperature = 90.0;
  pot.max_temperature = 90.0;
  for (int i = 0; i < 120; ++i) step(w, fixture_kb(), kDt);
  EXPECT_LT(w.object("pot").temperature, 90.0);
  EXPECT_GT(w.object("pot").temperature, 23.0);
  EXPECT_EQ(w.object("pot").max_temperature, 90.0);
  EXPECT_NEAR(w.clock, 2.0, 1e-9);
}

TEST(Simulation, OffSourceDoesNotHeat) {
  WorldState w = empty_room();
  add_object(w, "oven", "toaster_oven.n.01", on_floor("toaster_oven.n.01", 3, 3));
  add_object(w, "apple", "apple.n.01", {3, 3, 0.07});
  for (int i = 0; i < 60; ++i) step(w, fixture_kb(), kDt);
  EXPECT_DOUBLE_EQ(w.object("apple").temperature, 23.0);
}

TEST(Simulation, FreezerCools) {
  WorldState w = empty_room();
  add_object(w, "freezer", "freezer.n.01", on_floor("freezer.n.01", 3, 3)).toggled_on = true;
  add_object(w, "ice", "ice.n.01", {3, 3, 0.2});
  for (int i = 0; i < 60 * 120; ++i) step(w, fixture_kb(), 0.1);
  EXPECT_TRUE(holds(w, Predicate::Frozen, {"ice"}));
}

TEST(Simulation, RagSoaksInFilledSink) {
  WorldState w = empty_room();
  add_object(w, "sink", "sink.n.01", on_floor("sink.n.01", 3, 3));
  ASSERT_TRUE(sample(w, fixture_kb(), Predicate::Filled, std::vector<std::string>{"sink", "water.n.06"}, true));
  add_object(w, "rag", "rag.n.01", {3, 3, 0.05});
  for (int i = 0; i < 180; ++i) step(w, fixture_kb(), kDt);
  EXPECT_TRUE(holds(w, Predicate::Soaked, {"rag", "water.n.06"}));
  EXPECT_GE(w.object("rag").soaked["water.n.06"], 50);
}

TEST(Simulation, SourceEmitsIntoItsBasin) {
  WorldState w = empty_room();
  add_object(w, "sink", "sink.n.01", on_floor("sink.n.01", 3, 3)).toggled_on = true;
  std::size_t emitted = 0;
  for (int i = 0; i < 60; ++i) emitted += step(w, fixture_kb(), kDt).flows["water.n.06"].emitted;
  EXPECT_EQ(emitted, 50u);
  EXPECT_EQ(particles_inside(w, w.object("sink"), "water.n.06"), 50u);
}

TEST(Simulation, SinkDrains) {
  WorldState w = empty_room();
  auto& basin = add_object(w, "basin", "bucket.n.01", on_floor("bucket.n.01", 3, 3));
  basin.sink_point = Vec3{0, 0, -0.1};
  auto& sys = w.system("water.n.06", SubstanceKind::Liquid);
  sys.particles.push_back({{3, 3, 0.09}, 23.0});
  sys.particles.push_back({{3.1, 3.1, 0.2}, 23.0});
  auto report = step(w, fixture_kb(), kDt);
  EXPECT_EQ(report.flows["water.n.06"].sunk, 1u);
  EXPECT_EQ(w.substances["water.n.06"].particles.size(), 1u);
}

TEST(Simulation, TransitionsFireDuringStep) {
  WorldState w = load_scene_file(data_path("worlds/loaded_blender.json"), fixture_kb());
  auto report = step(w, fixture_kb(), kDt);
  ASSERT_EQ(report.transitions.size(), 1u);
  EXPECT_EQ(report.transitions[0].rule_id, "make_strawberry_slushie");
  EXPECT_EQ(report.flows["agave.n.01"].consumed, 1u);
}

TEST(Simulation, RejectsNonPositiveDt) {
  WorldState w = empty_room();
  EXPECT_THROW(step(w, fixture_kb(), 0.0), std::invalid_argument);
}
