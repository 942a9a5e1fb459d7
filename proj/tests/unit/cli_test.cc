#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "vizplan/io.h"
#include "vizplan_cli/commands.h"

namespace vizplan::cli {
namespace {

namespace fs = std::filesystem;

const fs::path kData = VIZPLAN_TEST_DATA_DIR;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("vizplan_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

ScenarioConfig minimal() {
  auto r = validate_config(kData / "minimal.json");
  EXPECT_TRUE(r.ok());
  return *r.config;
}

bool mentions(const std::vector<std::string>& violations, const std::string& needle) {
  for (const auto& v : violations) {
    if (v.find(needle) != std::string::npos) return true;
  }
  return false;
}

int cli(std::vector<const char*> args, std::string* out = nullptr, std::string* err = nullptr) {
  args.insert(args.begin(), "vizplan");
  std::ostringstream o, e;
  const int code = run_cli(static_cast<int>(args.size()), args.data(), o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return code;
}

TEST(Config, ResolvedEchoMatchesGolden) {
  const ScenarioConfig config = minimal();
  EXPECT_EQ(resolved_json(config), io::read_file(kData / "minimal.resolved.json"));
  // The echo is itself a valid scenario that resolves to the same text.
  const auto again = validate_config_text(resolved_json(config));
  ASSERT_TRUE(again.ok());
  EXPECT_EQ(resolved_json(*again.config), resolved_json(config));
}

TEST(Config, CollectsEveryViolation) {
  const auto r = validate_config_text(
      R"({"robot": {"type": "arm", "link_lengths": [20, 14]}, "samples": 5, "k": 5,
          "metric": "l1", "bogus": 1, "gold_eps": 0})");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r.violations, "seed"));
  EXPECT_TRUE(mentions(r.violations, "bogus"));
  EXPECT_TRUE(mentions(r.violations, "metric"));
  EXPECT_TRUE(mentions(r.violations, "gold_eps"));
  EXPECT_TRUE(mentions(r.violations, "k"));
  EXPECT_GE(r.violations.size(), 5u);
}

TEST(Config, RejectsSemanticProblems) {
  const std::string robot = R"("robot": {"type": "arm", "link_lengths": [20, 14]})";
  EXPECT_FALSE(validate_config_text("{\"seed\": 1, " + robot + ", \"samples\": 10, \"k\": 10}").ok());
  EXPECT_TRUE(validate_config_text("{\"seed\": 1, " + robot + ", \"samples\": 11, \"k\": 10, \"embed\": {\"k\": 8}}").ok());
  // Arm leaves the canvas.
  EXPECT_FALSE(validate_config_text(R"({"seed": 1, "robot": {"type": "arm", "link_lengths": [40, 30]}})").ok());
  // Endpoint node beyond the sample count.
  EXPECT_FALSE(validate_config_text("{\"seed\": 1, " + robot + ", \"samples\": 20, \"k\": 3, \"start\": {\"node\": 20}}").ok());
  // Obstacle listed in a view that does not exist.
  EXPECT_FALSE(validate_config_text("{\"seed\": 1, " + robot +
                                    R"(, "obstacles": [{"type": "disc", "center": [10, 10], "radius": 2, "views": [1]}]})")
                   .ok());
  // Scripted motion faster than the displacement bound.
  EXPECT_FALSE(validate_config_text("{\"seed\": 1, " + robot +
                                    R"(, "obstacles": [{"type": "disc", "center": [10, 10], "radius": 2}],
                                        "dynamic": {"max_displacement": 1, "motions": [{"obstacle": 0, "start": 0, "steps": 2, "delta": [2, 0]}]}})")
                   .ok());
  EXPECT_FALSE(validate_config_text("not json").ok());
}

TEST(Config, TrackFollowsMotions) {
  ScenarioConfig c = minimal();
  c.scene.obstacles.push_back(simworld::Shape::disc({10, 10}, 2));
  c.motions.push_back({0, 2, 3, {1, 0}});
  const auto track = c.track();
  ASSERT_EQ(track.scenes.size(), 6u);
  const double expected[] = {10, 10, 10, 11, 12, 13};
  for (std::size_t t = 0; t < 6; ++t) EXPECT_DOUBLE_EQ(track.scenes[t].obstacles[0].center.x, expected[t]);
}

TEST(Cli, ExitCodesAndErrorJson) {
  std::string out, err;
  const std::string minimal_path = (kData / "minimal.json").string();
  EXPECT_EQ(cli({"validate", minimal_path.c_str()}, &out), kExitOk);
  EXPECT_EQ(out, io::read_file(kData / "minimal.resolved.json"));

  const fs::path dir = scratch_dir("bad");
  fs::create_directories(dir);
  io::write_file(dir / "bad.json", R"({"seed": 1, "samples": 3})");
  const std::string bad = (dir / "bad.json").string();
  EXPECT_EQ(cli({"validate", bad.c_str()}, &out, &err), kExitBadConfig);
  EXPECT_NE(err.find("\"violations\""), std::string::npos);
  EXPECT_EQ(cli({"frobnicate"}, &out, &err), kExitBadConfig);
  EXPECT_EQ(cli({"build", "/nonexistent/scenario.json"}, &out, &err), kExitBadConfig);
  // plan needs endpoints.
  const std::string out_dir = (dir / "out").string();
  EXPECT_EQ(cli({"plan", minimal_path.c_str(), "-o", out_dir.c_str()}, &out, &err), kExitBadConfig);
  fs::remove_all(dir);
}

TEST(Cli, PlanFromNodeToItself) {
  ScenarioConfig c = minimal();
  c.start = Endpoint{graph::NodeId{7}, std::nullopt};
  c.goal = c.start;
  const fs::path dir = scratch_dir("plan");
  std::ostringstream out;
  EXPECT_EQ(run_plan(c, {1, dir}, out), kExitOk);
  const std::string path = io::read_file(dir / "path.json");
  EXPECT_NE(path.find("\"found\": true"), std::string::npos);
  EXPECT_NE(path.find("\"weight\": 0.0"), std::string::npos);
  EXPECT_NE(path.find("\"id\": 7"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "path.pgm"));
  fs::remove_all(dir);
}

TEST(Cli, GoldEvalLeavesNoBadEdges) {
  ScenarioConfig c = minimal();
  c.scene.obstacles.push_back(simworld::Shape::rect(72, 40, 76, 60));
  c.eval_metrics = {"theta-g"};
  c.eval_planners = {localplan::PlannerKind::kNone, localplan::PlannerKind::kGold};
  const fs::path dir = scratch_dir("eval");
  std::ostringstream out;
  ASSERT_EQ(run_eval(c, {1, dir}, out), kExitOk);
  std::istringstream csv(io::read_file(dir / "stats.csv"));
  std::string header, none, gold;
  std::getline(csv, header);
  std::getline(csv, none);
  std::getline(csv, gold);
  EXPECT_EQ(gold.rfind("theta-g,gold,60,4,", 0), 0u) << gold;
  // bad_remaining_pct and conservative_discards are both zero for the oracle.
  EXPECT_EQ(gold.substr(gold.size() - 4), ",0,0") << gold;
  EXPECT_EQ(none.rfind("theta-g,none,60,4,", 0), 0u) << none;
  fs::remove_all(dir);
}

TEST(Cli, BuildIsByteIdenticalAcrossRunsAndThreads) {
  ScenarioConfig c = minimal();
  c.scene.obstacles.push_back(simworld::Shape::rect(72, 40, 76, 60));
  c.planner = localplan::PlannerKind::kLtsIntersection;
  const fs::path a = scratch_dir("build_a"), b = scratch_dir("build_b"), d = scratch_dir("build_c");
  std::ostringstream out;
  ASSERT_EQ(run_build(c, {1, a}, out), kExitOk);
  ASSERT_EQ(run_build(c, {1, b}, out), kExitOk);
  ASSERT_EQ(run_build(c, {3, d}, out), kExitOk);
  const std::string first = io::read_file(a / "vrm.json");
  EXPECT_EQ(first, io::read_file(b / "vrm.json"));
  EXPECT_EQ(first, io::read_file(d / "vrm.json"));
  for (const auto& p : {a, b, d}) fs::remove_all(p);
}

}  // namespace
}  // namespace vizplan::cli
