// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: plan, features, export-viz, oracle.

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/core/json_util.hpp"
#include "dexgrasp/oracle/runner.hpp"
#include "dexgrasp/pipeline/config.hpp"
#include "dexgrasp/pipeline/export.hpp"
#include "dexgrasp/pipeline/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#ifndef DEXGRASP_DEFAULT_CONFIG
#define DEXGRASP_DEFAULT_CONFIG "data/pipeline.json"
#endif

namespace {

using namespace dexgrasp;
namespace fs = std::filesystem;

constexpr int kExitOther = 1;
constexpr int kExitUsage = 2;

/// Flags that override fields of the config document.
struct Overrides {
  std::optional<std::string> scene, hand, arm, friction, prompts, providers, mock_fixture, pinch_alignment, metric;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples, edges, keep;
  std::optional<double> gate, tilt, standoff, sigma_position, sigma_rotation;
  bool no_rere = false;

  void add_to(CLI::App& app) {
    app.add_option("--scene", scene, "scene directory (rgb.ppm, depth.pgm, mask.pgm, intrinsics.json)");
    app.add_option("--hand", hand, "hand config document");
    app.add_option("--arm", arm, "arm config document");
    app.add_option("--friction", friction, "friction table");
    app.add_option("--prompts", prompts, "prompt template document");
    app.add_option("--providers", providers, "provider mode")->check(CLI::IsMember({"mock", "http"}));
    app.add_option("--mock-fixture", mock_fixture, "mock provider fixture");
    app.add_option("--seed", seed, "sampler seed");
    app.add_option("--samples", samples, "number of pose samples");
    app.add_option("--sigma-position", sigma_position, "position standard deviation (m)");
    app.add_option("--sigma-rotation", sigma_rotation, "rotation standard deviation (rad)");
    app.add_option("--tilt", tilt, "nominal tilt about the pinch axis (rad)");
    app.add_option("--standoff", standoff, "nominal standoff along the approach (m)");
    app.add_option("--pinch-alignment", pinch_alignment, "pinch axis convention")
        ->check(CLI::IsMember({"parallel", "perpendicular"}));
    app.add_option("--edges", edges, "friction cone edges");
    app.add_option("--metric", metric, "quality metric")->check(CLI::IsMember({"inscribed", "enclosing"}));
    app.add_option("--keep", keep, "ranked candidates passed to motion selection");
    app.add_option("--gate", gate, "alignment gate in [0, 1]");
    app.add_flag("--no-rere", no_rere, "skip enrichment for text instructions");
  }

  void apply(pipeline::PipelineConfig& c) const {
    if (scene) c.scene = pipeline::SceneFiles::in_directory(*scene, c.scene.depth_scale);
    if (hand) c.hand = *hand;
    if (arm) c.arm = *arm;
    if (friction) c.friction = *friction;
    if (prompts) c.prompts = *prompts;
    if (providers) c.providers.mode = *providers;
    if (mock_fixture) c.providers.mock_fixture = *mock_fixture;
    if (seed) c.seed = *seed;
    if (samples) c.samples = *samples;
    if (sigma_position) c.sampler.sigma_position = *sigma_position;
    if (sigma_rotation) c.sampler.sigma_rotation = *sigma_rotation;
    if (tilt) c.tilt = *tilt;
    if (standoff) c.standoff = *standoff;
    if (pinch_alignment) c.pinch_alignment = dgcg::pinch_alignment_from_string(*pinch_alignment);
    if (edges) c.edges = *edges;
    if (metric) c.metric = dgr::metric_kind_from_string(*metric);
    if (keep) c.keep = *keep;
    if (gate) c.rere.gate = *gate;
    if (no_rere) c.rere.enabled = false;
  }
};

/// Parses the config without the file checks so that overrides can replace
/// missing paths; validate() runs once the overrides are in.
pipeline::PipelineConfig load_config(const std::string& path, const Overrides& o) {
  if (!fs::is_regular_file(path)) throw ConfigError("config not found: '" + path + "'");
  auto c = pipeline::PipelineConfig::from_json(load_json(path), fs::path(path).parent_path());
  o.apply(c);
  c.validate();
  return c;
}

void log_timing(const std::vector<std::pair<std::string, double>>& t) {
  std::string line = "timing (ms):";
  char buf[64];
  for (const auto& [name, ms] : t) {
    std::snprintf(buf, sizeof buf, " %s=%.1f", name.c_str(), ms);
    line += buf;
  }
  std::cerr << line << '\n';
}

int cmd_plan(const std::string& config, const Overrides& o, const std::optional<std::string>& text,
             const std::optional<std::string>& audio, const std::optional<std::string>& output, bool with_timing,
             std::string& stage) {
  pipeline::StageClock clock;
  try {
    const auto cfg = load_config(config, o);
    pipeline::Instruction in;
    if (text) in.text = *text;
    if (audio) in.audio = fs::path(*audio);
    const auto result = pipeline::run_plan(cfg, in, clock);
    log_timing(result.timing_ms);
    const std::string doc = result.to_json(with_timing).dump(2) + "\n";
    std::cout << doc;
    if (output) write_text_file(*output, doc);
    return 0;
  } catch (...) {
    stage = clock.current();
    throw;
  }
}

int cmd_features(const std::string& config, const Overrides& o, const std::string& out_dir, std::string& stage) {
  stage = "config";
  const auto cfg = load_config(config, o);
  stage = "scene";
  const auto frame = pipeline::load_scene(cfg.scene);
  stage = "features";
  const auto f = features::extract_features(frame, cfg.tangent_radius_px);
  stage = "export";
  std::cout << pipeline::export_features(frame, f, out_dir).dump(2) << '\n';
  return 0;
}

int cmd_export_viz(const std::string& config, const Overrides& o, const std::string& result_path,
                   const std::string& out_dir, std::string& stage) {
  stage = "config";
  const auto cfg = load_config(config, o);
  const Json result = load_json(result_path);
  stage = "export";
  const auto ex = pipeline::export_grasp_geometry(result, cfg, out_dir);
  if (!ex.warning.empty()) std::cerr << "dexgrasp: warning: " << ex.warning << '\n';
  for (const auto& p : ex.files) std::cout << p.string() << '\n';
  return 0;
}

int cmd_oracle(const std::string& kind, int trials, std::uint64_t seed, double tolerance) {
  const auto report = kind == "force-closure" ? oracle::run_force_closure_oracle(trials, seed)
                                              : oracle::run_quality_oracle(trials, seed, tolerance);
  Json j = report.to_json();
  std::cout << j.dump(2) << '\n';
  std::cerr << report.kind << ": " << report.agreed << "/" << report.compared << " agree in " << report.seconds
            << " s\n";
  return report.pass() ? 0 : kExitOther;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Instruction-driven dexterous grasp planner"};
  app.require_subcommand(1);

  std::string config = DEXGRASP_DEFAULT_CONFIG;
  Overrides overrides;

  auto* plan = app.add_subcommand("plan", "plan a grasp for a text or spoken instruction");
  std::optional<std::string> text, audio, output;
  bool with_timing = false;
  plan->add_option("--config", config, "pipeline config document")->capture_default_str();
  auto* text_opt = plan->add_option("--text", text, "instruction text");
  auto* audio_opt = plan->add_option("--audio", audio, "instruction recording (WAV)");
  text_opt->excludes(audio_opt);
  plan->add_option("--output", output, "also write the result document here");
  plan->add_flag("--with-timing", with_timing, "include stage timing in the result document");
  overrides.add_to(*plan);

  auto* feats = app.add_subcommand("features", "dump object features of the configured scene");
  std::string feat_dir = "features_out";
  feats->add_option("--config", config, "pipeline config document")->capture_default_str();
  feats->add_option("--out-dir", feat_dir, "output directory")->capture_default_str();
  overrides.add_to(*feats);

  auto* viz = app.add_subcommand("export-viz", "write grasp geometry of a result document");
  std::string result_path, viz_dir = "viz_out";
  viz->add_option("--config", config, "pipeline config document")->capture_default_str();
  viz->add_option("--result", result_path, "result document from 'plan'")->required();
  viz->add_option("--out-dir", viz_dir, "output directory")->capture_default_str();
  overrides.add_to(*viz);

  auto* orc = app.add_subcommand("oracle", "compare the grasp engine with brute-force oracles");
  std::string kind = "force-closure";
  int trials = 200;
  std::uint64_t seed = 1;
  double tolerance = 0.10;
  orc->add_option("--kind", kind, "oracle kind")
      ->check(CLI::IsMember({"force-closure", "quality"}))
      ->capture_default_str();
  orc->add_option("--trials", trials, "number of random fixtures")->check(CLI::NonNegativeNumber)->capture_default_str();
  orc->add_option("--seed", seed, "fixture seed")->capture_default_str();
  orc->add_option("--tolerance", tolerance, "quality relative error bound")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  std::string stage = "config";
  try {
    if (*plan) {
      if (!text && !audio) throw ConfigError("plan needs --text or --audio");
      return cmd_plan(config, overrides, text, audio, output, with_timing, stage);
    }
    if (*feats) return cmd_features(config, overrides, feat_dir, stage);
    if (*viz) return cmd_export_viz(config, overrides, result_path, viz_dir, stage);
    return cmd_oracle(kind, trials, seed, tolerance);
  } catch (const Error& e) {
    std::cerr << "dexgrasp: error in " << stage << " stage: " << e.what() << '\n';
    return static_cast<int>(e.error_class());
  } catch (const std::exception& e) {
    std::cerr << "dexgrasp: error in " << stage << " stage: " << e.what() << '\n';
    return kExitOther;
  }
}
