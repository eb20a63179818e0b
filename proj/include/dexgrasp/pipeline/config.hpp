// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Pipeline configuration document. Relative paths resolve against the
// directory holding the document.

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/core/json_util.hpp"
#include "dexgrasp/dgcg/candidates.hpp"
#include "dexgrasp/dgr/gws.hpp"
#include "dexgrasp/rere/enrichment.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace dexgrasp::pipeline {

namespace fs = std::filesystem;

struct SceneFiles {
  fs::path rgb, depth, mask, intrinsics;
  double depth_scale = 0.001;  // m per raster unit

  /// Standard file names inside one scene directory.
  static SceneFiles in_directory(const fs::path& dir, double depth_scale = 0.001) {
    return {dir / "rgb.ppm", dir / "depth.pgm", dir / "mask.pgm", dir / "intrinsics.json", depth_scale};
  }
};

struct ProviderConfig {
  std::string mode = "mock";  // mock | http
  fs::path mock_fixture;
  double timeout_s = 10.0;
};

struct PipelineConfig {
  SceneFiles scene;
  fs::path hand, arm, friction, prompts;
  ProviderConfig providers;
  rere::RereConfig rere;

  int normals_k = 12;
  double tangent_radius_px = 7.0;

  int samples = 256;
  dgcg::SamplerParams sampler;
  double tilt = 0.0;      // rad
  double standoff = 0.0;  // m
  dgcg::PinchAlignment pinch_alignment = dgcg::PinchAlignment::Parallel;
  std::uint64_t seed = 7;
  double contact_tolerance = 0.005;  // m
  double affordance_floor = 0.05;
  dgcg::AffordanceParams affordance;

  int edges = 8;
  dgr::MetricKind metric = dgr::MetricKind::Inscribed;
  int keep = 3;

  double obstacle_voxel = 0.02;  // m, 0 keeps every background point

  /// Ranges and referenced files. Throws ConfigError or ValidationError.
  void validate() const {
    auto exists = [](const fs::path& p, const char* what) {
      if (p.empty() || !fs::is_regular_file(p)) throw ConfigError(std::string(what) + " not found: '" + p.string() + "'");
    };
    exists(scene.rgb, "scene rgb");
    exists(scene.depth, "scene depth");
    exists(scene.mask, "scene mask");
    exists(scene.intrinsics, "scene intrinsics");
    exists(hand, "hand config");
    exists(arm, "arm config");
    exists(friction, "friction table");
    exists(prompts, "prompt template");
    if (providers.mode == "mock")
      exists(providers.mock_fixture, "mock provider fixture");
    else if (providers.mode != "http")
      throw ValidationError("providers.mode must be mock|http, got '" + providers.mode + "'");
    if (!(providers.timeout_s > 0.0)) throw ValidationError("providers.timeout_s must be positive");
    if (!(scene.depth_scale > 0.0)) throw ValidationError("scene.depth_scale must be positive");
    if (!(rere.gate >= 0.0 && rere.gate <= 1.0)) throw ValidationError("rere.gate must be in [0, 1]");
    rere.weights.validate();
    if (normals_k < 3) throw ValidationError("features.normals_k must be >= 3");
    if (!(tangent_radius_px > 0.0)) throw ValidationError("features.tangent_radius must be positive");
    if (samples < 1) throw ValidationError("dgcg.samples must be >= 1");
    if (!(sampler.sigma_position >= 0.0) || !(sampler.sigma_rotation >= 0.0))
      throw ValidationError("dgcg sigmas must be >= 0");
    if (!(contact_tolerance > 0.0)) throw ValidationError("dgcg.contact_tolerance must be positive");
    if (!(affordance_floor > 0.0 && affordance_floor <= 1.0))
      throw ValidationError("dgcg.affordance_floor must be in (0, 1]");
    if (!(affordance.d_max > 0.0) || !(affordance.steepness > 0.0))
      throw ValidationError("dgcg affordance parameters must be positive");
    if (edges < 3) throw ValidationError("dgr.edges must be >= 3");
    if (keep < 1) throw ValidationError("dgr.keep must be >= 1");
    if (!(obstacle_voxel >= 0.0)) throw ValidationError("motion.obstacle_voxel must be >= 0");
  }

  static PipelineConfig from_json(const Json& doc, const fs::path& base_dir) {
    auto path = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base_dir / p; };
    PipelineConfig c;
    const Json scene = require<Json>(doc, "scene");
    const double scale = optional<double>(scene, "depth_scale", 0.001);
    c.scene = SceneFiles::in_directory(path(optional<std::string>(scene, "dir", ".")), scale);
    for (const auto& [key, target] : {std::pair{"rgb", &c.scene.rgb}, std::pair{"depth", &c.scene.depth},
                                      std::pair{"mask", &c.scene.mask}, std::pair{"intrinsics", &c.scene.intrinsics}})
      if (scene.contains(key)) *target = path(require<std::string>(scene, key));

    c.hand = path(require<std::string>(doc, "hand"));
    c.arm = path(require<std::string>(doc, "arm"));
    c.friction = path(require<std::string>(doc, "friction"));
    c.prompts = path(require<std::string>(doc, "prompts"));

    if (doc.contains("providers")) {
      const Json& p = doc["providers"];
      c.providers.mode = optional<std::string>(p, "mode", c.providers.mode);
      if (p.contains("mock_fixture")) c.providers.mock_fixture = path(require<std::string>(p, "mock_fixture"));
      c.providers.timeout_s = optional<double>(p, "timeout_s", c.providers.timeout_s);
    }
    if (doc.contains("rere")) {
      const Json& r = doc["rere"];
      c.rere.enabled = optional<bool>(r, "enabled", c.rere.enabled);
      c.rere.gate = optional<double>(r, "gate", c.rere.gate);
      if (r.contains("weights")) {
        const Json& w = r["weights"];
        c.rere.weights.c = optional<double>(w, "C", c.rere.weights.c);
        c.rere.weights.s = optional<double>(w, "S", c.rere.weights.s);
        c.rere.weights.m = optional<double>(w, "M", c.rere.weights.m);
        c.rere.weights.p = optional<double>(w, "P", c.rere.weights.p);
      }
      if (r.contains("audio")) {
        const Json& a = r["audio"];
        c.rere.audio.window_ms = optional<double>(a, "window_ms", c.rere.audio.window_ms);
        c.rere.audio.threshold = optional<double>(a, "threshold", c.rere.audio.threshold);
        c.rere.audio.hangover_ms = optional<double>(a, "hangover_ms", c.rere.audio.hangover_ms);
      }
    }
    if (doc.contains("features")) {
      const Json& f = doc["features"];
      c.normals_k = optional<int>(f, "normals_k", c.normals_k);
      c.tangent_radius_px = optional<double>(f, "tangent_radius", c.tangent_radius_px);
    }
    if (doc.contains("dgcg")) {
      const Json& g = doc["dgcg"];
      c.samples = optional<int>(g, "samples", c.samples);
      c.sampler.sigma_position = optional<double>(g, "sigma_position", c.sampler.sigma_position);
      c.sampler.sigma_rotation = optional<double>(g, "sigma_rotation", c.sampler.sigma_rotation);
      c.tilt = optional<double>(g, "tilt", c.tilt);
      c.standoff = optional<double>(g, "standoff", c.standoff);
      c.pinch_alignment =
          dgcg::pinch_alignment_from_string(optional<std::string>(g, "pinch_alignment", "parallel"));
      c.seed = optional<std::uint64_t>(g, "seed", c.seed);
      c.contact_tolerance = optional<double>(g, "contact_tolerance", c.contact_tolerance);
      c.affordance_floor = optional<double>(g, "affordance_floor", c.affordance_floor);
      if (g.contains("affordance")) {
        const Json& a = g["affordance"];
        c.affordance.d_max = optional<double>(a, "d_max", c.affordance.d_max);
        c.affordance.steepness = optional<double>(a, "steepness", c.affordance.steepness);
        c.affordance.midpoint = optional<double>(a, "midpoint", c.affordance.midpoint);
      }
    }
    if (doc.contains("dgr")) {
      const Json& r = doc["dgr"];
      c.edges = optional<int>(r, "edges", c.edges);
      c.metric = dgr::metric_kind_from_string(optional<std::string>(r, "metric", "inscribed"));
      c.keep = optional<int>(r, "keep", c.keep);
    }
    if (doc.contains("motion")) c.obstacle_voxel = optional<double>(doc["motion"], "obstacle_voxel", c.obstacle_voxel);
    return c;
  }

  /// Parses and validates the document at `path`.
  static PipelineConfig load(const fs::path& path) {
    if (!fs::is_regular_file(path)) throw ConfigError("config not found: '" + path.string() + "'");
    PipelineConfig c = from_json(load_json(path), path.parent_path());
    c.validate();
    return c;
  }
};

}  // namespace dexgrasp::pipeline
