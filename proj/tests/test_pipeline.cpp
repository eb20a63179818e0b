// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#include "dexgrasp/oracle/runner.hpp"
#include "dexgrasp/pipeline/config.hpp"
#include "dexgrasp/pipeline/export.hpp"
#include "dexgrasp/pipeline/pipeline.hpp"
#include "dexgrasp/scene/ply.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

using namespace dexgrasp;
namespace fs = std::filesystem;

namespace {

const fs::path kData = DEXGRASP_DATA_DIR;
const fs::path kConfig = kData / "pipeline.json";
const std::string kCli = DEXGRASP_CLI;
const std::string kText = "give me a duck on the table";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dexgrasp_test_pipeline_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

/// Runs the CLI with stdout and stderr sent to files under `dir`; returns the
/// exit status.
int run_cli(const std::string& args, const fs::path& dir) {
  const std::string cmd = "'" + kCli + "' " + args + " > '" + (dir / "stdout.txt").string() + "' 2> '" +
                          (dir / "stderr.txt").string() + "'";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

const pipeline::GraspPlanResult& shipped_result() {
  static const pipeline::GraspPlanResult r =
      pipeline::run_plan(pipeline::PipelineConfig::load(kConfig), {kText, std::nullopt});
  return r;
}

}  // namespace

TEST(Config, ShippedConfigLoads) {
  const auto c = pipeline::PipelineConfig::load(kConfig);
  EXPECT_EQ(c.samples, 256);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.pinch_alignment, dgcg::PinchAlignment::Parallel);
  EXPECT_EQ(c.scene.rgb, kData / "scenes/cylinder" / "rgb.ppm");
  EXPECT_EQ(c.providers.mode, "mock");
}

TEST(Config, MissingHandConfigIsConfigError) {
  auto c = pipeline::PipelineConfig::load(kConfig);
  c.hand = kData / "no_such_hand.json";
  try {
    c.validate();
    FAIL() << "expected ConfigError";
  } catch (const Error& e) {
    EXPECT_EQ(e.error_class(), ErrorClass::Config);
  }
}

TEST(Config, RejectsOutOfRangeValues) {
  auto c = pipeline::PipelineConfig::load(kConfig);
  c.samples = 0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = pipeline::PipelineConfig::load(kConfig);
  c.rere.gate = 1.5;
  EXPECT_THROW(c.validate(), ValidationError);
  c = pipeline::PipelineConfig::load(kConfig);
  c.providers.mode = "carrier-pigeon";
  EXPECT_THROW(c.validate(), ValidationError);
}

TEST(Pipeline, ShippedSceneProducesForceClosureGrasp) {
  const auto& r = shipped_result();
  EXPECT_GE(r.force_closure, 1);
  EXPECT_GE(r.survivors, 1);
  ASSERT_FALSE(r.top.empty());
  EXPECT_LE(r.top.size(), 3u);
  ASSERT_TRUE(r.enriched.has_value());
  EXPECT_EQ(r.enriched->text, "the yellow rubber duck on the left");
  EXPECT_EQ(r.material, "rubber");
  EXPECT_DOUBLE_EQ(r.mu, 0.8);
  for (std::size_t i = 1; i < r.top.size(); ++i) EXPECT_GE(r.top[i - 1].q, r.top[i].q);
}

TEST(Pipeline, BestActionIsAmongTopThreeAndFinite) {
  const auto& r = shipped_result();
  bool found = false;
  for (const auto& o : r.top) {
    EXPECT_TRUE(o.action.allFinite());
    found = found || o.action == r.best_option().action;
  }
  EXPECT_TRUE(found);
  EXPECT_TRUE(r.arm_goal.allFinite());
  EXPECT_GT(r.motion_cost, 0.0);
}

TEST(Pipeline, BestPinchAxisFollowsConvention) {
  const auto& r = shipped_result();
  EXPECT_LT(r.best_option().pinch_angle, 15.0 * kPi / 180.0);
}

TEST(Pipeline, ResultDocumentIsDeterministic) {
  const auto cfg = pipeline::PipelineConfig::load(kConfig);
  const auto again = pipeline::run_plan(cfg, {kText, std::nullopt});
  EXPECT_EQ(shipped_result().to_json().dump(2), again.to_json().dump(2));
  EXPECT_FALSE(again.to_json().contains("timing_ms"));
  EXPECT_TRUE(again.to_json(true).contains("timing_ms"));
}

TEST(Pipeline, StageTimingIsAlwaysRecorded) {
  const auto& r = shipped_result();
  std::vector<std::string> names;
  for (const auto& [name, ms] : r.timing_ms) {
    names.push_back(name);
    EXPECT_GE(ms, 0.0);
  }
  EXPECT_EQ(names, (std::vector<std::string>{"config", "scene", "rere", "features", "dgcg", "dgr", "motion"}));
}

TEST(Pipeline, DisabledEnrichmentSkipsProvidersForText) {
  auto cfg = pipeline::PipelineConfig::load(kConfig);
  cfg.rere.enabled = false;
  cfg.providers.mock_fixture = scratch("unavailable") / "mock.json";
  write_text_file(cfg.providers.mock_fixture, R"({"unavailable": true})");
  const auto r = pipeline::run_plan(cfg, {"grab the rubber thing", std::nullopt});
  EXPECT_FALSE(r.enriched.has_value());
  EXPECT_EQ(r.material, "rubber");
}

TEST(Pipeline, LowAlignmentStopsAtEnrichment) {
  const auto cfg = pipeline::PipelineConfig::load(kConfig);
  pipeline::StageClock clock;
  EXPECT_THROW(pipeline::run_plan(cfg, {"give me the blue plate", std::nullopt}, clock), ClarificationNeeded);
  EXPECT_EQ(clock.current(), "rere");
}

TEST(Cli, PlanWritesDeterministicBytes) {
  const auto dir = scratch("plan");
  const std::string args = "plan --config " + quoted(kConfig) + " --text '" + kText + "' --output ";
  ASSERT_EQ(run_cli(args + quoted(dir / "a.json"), dir), 0);
  ASSERT_EQ(run_cli(args + quoted(dir / "b.json"), dir), 0);
  const std::string a = read_text_file(dir / "a.json");
  EXPECT_EQ(a, read_text_file(dir / "b.json"));
  EXPECT_EQ(a, read_text_file(dir / "stdout.txt"));
  EXPECT_EQ(a, shipped_result().to_json().dump(2) + "\n");
}

TEST(Cli, MissingHandConfigExitsTwo) {
  const auto dir = scratch("nohand");
  EXPECT_EQ(run_cli("plan --config " + quoted(kConfig) + " --text duck --hand " + quoted(dir / "missing.json"), dir),
            2);
}

TEST(Cli, EmptyMaskExitsThree) {
  const auto dir = scratch("emptymask");
  const fs::path scene = dir / "scene";
  fs::create_directories(scene);
  for (const char* f : {"rgb.ppm", "depth.pgm", "intrinsics.json"})
    fs::copy_file(kData / "scenes/cylinder" / f, scene / f);
  const auto mask = scene::load_mask(kData / "scenes/cylinder/mask.pgm");
  scene::save_mask(scene::BinaryMask(mask.width, mask.height, 0), scene / "mask.pgm");
  EXPECT_EQ(run_cli("features --config " + quoted(kConfig) + " --scene " + quoted(scene) + " --out-dir " +
                        quoted(dir / "out"),
                    dir),
            3);
  EXPECT_EQ(run_cli("plan --config " + quoted(kConfig) + " --text '" + kText + "' --scene " + quoted(scene), dir), 3);
  EXPECT_NE(read_text_file(dir / "stderr.txt").find("features"), std::string::npos);
}

TEST(Cli, ObjectOutOfReachExitsFive) {
  const auto dir = scratch("reach");
  Json arm = load_json(kData / "arm_ur5.json");
  arm["base_pose"]["xyz"] = {5.0, 0.0, 0.75};
  write_text_file(dir / "arm_far.json", arm.dump(2));
  EXPECT_EQ(run_cli("plan --config " + quoted(kConfig) + " --text '" + kText + "' --arm " + quoted(dir / "arm_far.json"),
                    dir),
            5);
}

TEST(Cli, FeaturesDirectionMatchesTruthAndIsDeterministic) {
  const auto dir = scratch("features");
  ASSERT_EQ(run_cli("features --config " + quoted(kConfig) + " --out-dir " + quoted(dir / "a"), dir), 0);
  ASSERT_EQ(run_cli("features --config " + quoted(kConfig) + " --out-dir " + quoted(dir / "b"), dir), 0);
  EXPECT_EQ(read_text_file(dir / "a/features.json"), read_text_file(dir / "b/features.json"));
  EXPECT_EQ(read_text_file(dir / "a/features.ppm"), read_text_file(dir / "b/features.ppm"));
  const Json rec = load_json(dir / "a/features.json");
  const Json truth = load_json(kData / "scenes/cylinder/truth.json");
  const auto v = rec["direction"].get<std::vector<double>>();
  const auto t = truth["axis"].get<std::vector<double>>();
  const double a = angle_between(Vec3(v[0], v[1], v[2]), Vec3(t[0], t[1], t[2]));
  EXPECT_LT(std::min(a, kPi - a), 15.0 * kPi / 180.0);
}

TEST(Cli, ExportVizWritesReloadableGeometry) {
  const auto dir = scratch("viz");
  write_text_file(dir / "result.json", shipped_result().to_json().dump(2));
  ASSERT_EQ(run_cli("export-viz --config " + quoted(kConfig) + " --result " + quoted(dir / "result.json") +
                        " --out-dir " + quoted(dir / "out"),
                    dir),
            0);
  const auto cloud = scene::load_cloud(dir / "out/cloud.ply");
  EXPECT_EQ(cloud.size(), shipped_result().object_points);

  // the contact markers are the fingers that touch the object at the best pose
  const auto cfg = pipeline::PipelineConfig::load(kConfig);
  const auto hand = hand::load_hand_config(cfg.hand);
  const auto per = pipeline::perceive(pipeline::load_scene(cfg.scene), cfg);
  const hand::IndexedCloud object(per.object);
  const auto s = hand::intersect_object(
      hand::place_hand(hand, pose_to_transform(shipped_result().best_option().action.head<6>())), object,
      cfg.contact_tolerance);
  const int dropped = hand::kFingers - static_cast<int>(s.fingers.size());
  ASSERT_LT(dropped, hand::kFingers);
  EXPECT_EQ(static_cast<int>(scene::load_cloud(dir / "out/contacts.ply").size()), hand::kFingers - dropped);
  for (const char* f : {"fingers.txt", "pinch_axis.txt", "gws_vertices.txt"}) EXPECT_TRUE(fs::exists(dir / "out" / f));
}

TEST(Cli, ExportVizWithEmptyTopThreeWritesNothing) {
  const auto dir = scratch("vizempty");
  Json doc = shipped_result().to_json();
  doc["top3"] = Json::array();
  write_text_file(dir / "result.json", doc.dump());
  ASSERT_EQ(run_cli("export-viz --config " + quoted(kConfig) + " --result " + quoted(dir / "result.json") +
                        " --out-dir " + quoted(dir / "out"),
                    dir),
            0);
  EXPECT_FALSE(fs::exists(dir / "out"));
  EXPECT_NE(read_text_file(dir / "stderr.txt").find("warning"), std::string::npos);
}

TEST(Cli, OracleZeroTrialsIsEmptyReport) {
  const auto dir = scratch("oracle0");
  ASSERT_EQ(run_cli("oracle --kind force-closure --trials 0", dir), 0);
  const Json r = load_json(dir / "stdout.txt");
  EXPECT_EQ(r["compared"], 0);
  EXPECT_EQ(r["pass"], true);
}

TEST(Cli, OracleUnknownKindIsUsageError) {
  const auto dir = scratch("oraclebad");
  EXPECT_EQ(run_cli("oracle --kind telepathy", dir), 2);
}

TEST(Cli, ForceClosureOracleAgreesOnTwoHundredFixtures) {
  const auto dir = scratch("oracle200");
  ASSERT_EQ(run_cli("oracle --kind force-closure --trials 200 --seed 1", dir), 0);
  const Json r = load_json(dir / "stdout.txt");
  EXPECT_EQ(r["agreed"], 200);
}

TEST(Oracle, QualityRunnerReportsOnlyForceClosureFixtures) {
  const auto r = oracle::run_quality_oracle(20, 3);
  EXPECT_EQ(r.trials, 20);
  EXPECT_LE(r.compared, 20);
  EXPECT_EQ(r.agreed + static_cast<int>(r.failures.size()), r.compared);
}
