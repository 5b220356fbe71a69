#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"

using bddl::testing::data_path;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = bddl::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kKb = data_path("kb/fixture_kb.json");

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / ("bddlkit_cli_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST(Cli, ValidateCleanProblem) {
  auto r = run({"validate", data_path("problems/clean_the_bottom_of_an_iron.bddl"), "--kb", kKb});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.doc()["schema"], "bddlkit.diagnostics/1");
  EXPECT_TRUE(r.doc()["diagnostics"].empty());
}

TEST(Cli, ValidateSubstanceMultiplicity) {
  auto r = run({"validate", data_path("problems/invalid/substance_multiplicity.bddl"), "--kb", kKb});
  EXPECT_EQ(r.code, 1);
  auto d = r.doc()["diagnostics"];
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0]["severity"], "error");
  EXPECT_EQ(d[0]["code"], "substance-multiplicity");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"validate", data_path("problems/nope.bddl"), "--kb", kKb}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"sample", data_path("problems/collect_trash.bddl"), "--kb", kKb}).code, 2);
}

TEST(Cli, SampleIsSeededAndReproducible) {
  const std::vector<std::string> base{"sample", data_path("problems/collect_trash.bddl"), "--scene",
                                      data_path("scenes/living_room.json"), "--kb", kKb};
  auto with_seed = [&](const std::string& s) {
    auto args = base;
    args.insert(args.end(), {"--seed", s});
    return run(args);
  };
  auto a = with_seed("7"), b = with_seed("8"), again = with_seed("7");
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(a.out, again.out);
  EXPECT_NE(a.doc()["world"], b.doc()["world"]);
  EXPECT_EQ(a.doc()["schema"], "bddlkit.sample/1");
  EXPECT_FALSE(a.doc()["literal_attempts"].empty());
  // The snapshot passes straight into check.
  auto snap = temp_file("snap7.json", a.out);
  auto c = run({"check", snap, "(onfloor bottle.n.01_1 floor.n.01_1)", "--kb", kKb});
  EXPECT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(c.doc()["value"], true);
}

TEST(Cli, SampleOversizedFails) {
  auto r = run({"sample", data_path("problems/invalid/oversized.bddl"), "--scene", data_path("scenes/kitchen.json"),
                "--kb", kKb, "--seed", "1", "--budget", "3"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.doc()["literal"], "(inside table.n.02_1 mason_jar.n.01_1)");
}

TEST(Cli, RunCleanTable) {
  auto r = run({"run", data_path("problems/clean_table.bddl"), "--script", data_path("scripts/clean_table.json"),
                "--scene", data_path("scenes/dining_kitchen.json"), "--seed", "1", "--kb", kKb});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = r.doc();
  EXPECT_EQ(doc["schema"], "bddlkit.report/1");
  EXPECT_EQ(doc["success"], true);
  EXPECT_EQ(doc["q_score"], 1.0);
  EXPECT_EQ(doc["primitive_count"], 6);
  EXPECT_EQ(doc["trace"].size(), 6u);
}

TEST(Cli, RunEmptyAndBrokenScripts) {
  auto empty = run({"run", data_path("problems/clean_table.bddl"), "--script", data_path("scripts/empty.json"),
                    "--scene", data_path("scenes/dining_kitchen.json"), "--kb", kKb});
  ASSERT_EQ(empty.code, 0) << empty.err;
  EXPECT_EQ(empty.doc()["success"], false);

  auto ghost = temp_file("ghost.json", R"({"schema": "bddlkit.script/1", "primitives": [{"kind": "pick", "target": "ghost_9"}]})");
  auto r = run({"run", data_path("problems/clean_table.bddl"), "--script", ghost, "--scene",
                data_path("scenes/dining_kitchen.json"), "--kb", kKb});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.doc()["success"], false);
  EXPECT_EQ(r.doc()["trace"][0]["ok"], false);

  auto bad = temp_file("bad.json", R"({"schema": "bddlkit.script/9", "primitives": []})");
  EXPECT_EQ(run({"run", data_path("problems/clean_table.bddl"), "--script", bad, "--scene",
                 data_path("scenes/dining_kitchen.json"), "--kb", kKb})
                .code,
            1);
}

TEST(Cli, BatchIsIndependentOfThreads) {
  std::vector<std::string> args{"run", data_path("problems/collect_trash.bddl"), "--script",
                                data_path("scripts/collect_trash.json"), "--scene", data_path("scenes/living_room.json"),
                                "--kb", kKb, "--seed", "3", "--episodes", "4"};
  auto one = args, four = args;
  one.insert(one.end(), {"--threads", "1"});
  four.insert(four.end(), {"--threads", "4"});
  auto a = run(one), b = run(four);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.doc()["schema"], "bddlkit.batch/1");
  EXPECT_EQ(a.doc()["episodes"].size(), 4u);
}

TEST(Cli, Inspection) {
  auto preds = run({"predicates"});
  ASSERT_EQ(preds.code, 0);
  EXPECT_FALSE(preds.doc()["predicates"].empty());

  auto props = run({"properties", "produce.n.01", "--kb", data_path("kb/two_leaf_kb.json")});
  ASSERT_EQ(props.code, 0);
  EXPECT_EQ(props.doc()["properties"], json::array({"sliceable"}));

  auto frozen = run({"check", data_path("worlds/frozen_turkey.json"), "(frozen turkey_0)", "--kb", kKb});
  ASSERT_EQ(frozen.code, 0) << frozen.err;
  EXPECT_EQ(frozen.doc()["value"], true);

  auto rules = run({"rules", "--dry-run", data_path("worlds/loaded_blender.json"), "--kb", kKb});
  ASSERT_EQ(rules.code, 0) << rules.err;
  ASSERT_EQ(rules.doc()["matches"].size(), 1u);
  EXPECT_EQ(rules.doc()["matches"][0]["rule"], "make_strawberry_slushie");

  EXPECT_EQ(run({"check", data_path("worlds/frozen_turkey.json"), "(toggled_on turkey_0)", "--kb", kKb}).code, 1);
}
