// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Instruction-to-grasp orchestration: enrichment, object features, candidate
// generation, ranking and arm motion selection.

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/core/json_util.hpp"
#include "dexgrasp/dgcg/candidates.hpp"
#include "dexgrasp/dgr/candidate_ranking.hpp"
#include "dexgrasp/dgr/friction.hpp"
#include "dexgrasp/features/feature_vector.hpp"
#include "dexgrasp/hand/hand_model.hpp"
#include "dexgrasp/motion/arm.hpp"
#include "dexgrasp/motion/selection.hpp"
#include "dexgrasp/pipeline/config.hpp"
#include "dexgrasp/rere/audio.hpp"
#include "dexgrasp/rere/enrichment.hpp"
#include "dexgrasp/rere/http_provider.hpp"
#include "dexgrasp/rere/providers.hpp"
#include "dexgrasp/scene/back_project.hpp"
#include "dexgrasp/scene/filters.hpp"
#include "dexgrasp/scene/normals.hpp"
#include "dexgrasp/scene/raster_io.hpp"

#include <algorithm>
#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dexgrasp::pipeline {

/// Plain text or a recorded utterance; exactly one is set.
struct Instruction {
  std::optional<std::string> text;
  std::optional<fs::path> audio;
};

/// Records the stage currently running so that a failure can be reported
/// with its origin, and the wall time each stage took.
class StageClock {
 public:
  void begin(std::string name) {
    close();
    current_ = std::move(name);
    start_ = std::chrono::steady_clock::now();
    open_ = true;
  }
  void close() {
    if (!open_) return;
    timings_.emplace_back(current_,
                          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count());
    open_ = false;
  }
  const std::string& current() const { return current_; }
  const std::vector<std::pair<std::string, double>>& timings() const { return timings_; }

 private:
  std::string current_ = "config";
  std::chrono::steady_clock::time_point start_;
  bool open_ = false;
  std::vector<std::pair<std::string, double>> timings_;
};

inline scene::SceneFrame load_scene(const SceneFiles& f) {
  scene::SceneFrame frame;
  frame.intrinsics = scene::CameraIntrinsics::from_json(load_json(f.intrinsics));
  frame.rgb = scene::load_rgb(f.rgb);
  frame.depth = scene::load_depth(f.depth, f.depth_scale);
  frame.mask = scene::load_mask(f.mask);
  return frame;
}

/// Features of the target plus its cloud with normals.
struct Perception {
  features::ObjectFeatures features;
  scene::PointCloud object;  // with normals
  Vec3 centroid = Vec3::Zero();
};

inline Perception perceive(const scene::SceneFrame& frame, const PipelineConfig& cfg) {
  Perception p;
  p.features = features::extract_features(frame, cfg.tangent_radius_px);
  p.object = scene::estimate_normals(p.features.cloud, cfg.normals_k).cloud;
  for (const auto& x : p.object.points) p.centroid += x;
  p.centroid /= static_cast<double>(p.object.size());
  return p;
}

/// Back-projected depth outside the target mask, voxel filtered.
inline scene::PointCloud background_obstacles(const scene::SceneFrame& frame, double voxel) {
  scene::BinaryMask outside = frame.mask;
  for (auto& m : outside.data) m = m ? 0 : 1;
  scene::PointCloud bg;
  try {
    bg = scene::back_project(frame.depth, frame.intrinsics, outside);
  } catch (const EmptySelection&) {
    return bg;
  }
  return voxel > 0.0 ? scene::voxel_downsample(bg, voxel) : bg;
}

/// Transcription and vision-language back ends selected by the config.
struct Providers {
  std::unique_ptr<rere::TranscriptionProvider> asr;
  std::unique_ptr<rere::VisionLanguageProvider> vlm;
};

inline Providers make_providers(const ProviderConfig& cfg) {
  Providers p;
  if (cfg.mode == "mock") {
    const Json fixture = load_json(cfg.mock_fixture);
    p.asr = std::make_unique<rere::MockProvider>(fixture);
    p.vlm = std::make_unique<rere::MockProvider>(fixture);
    return p;
  }
  auto asr = rere::Endpoint::from_env("DEXGRASP_ASR_URL", "DEXGRASP_ASR_API_KEY", cfg.timeout_s);
  auto vlm = rere::Endpoint::from_env("DEXGRASP_VLM_URL", "DEXGRASP_VLM_API_KEY", cfg.timeout_s);
  if (asr) p.asr = std::make_unique<rere::HttpTranscriptionProvider>(*asr);
  if (vlm) p.vlm = std::make_unique<rere::HttpVisionLanguageProvider>(*vlm);
  return p;
}

struct RankedOption {
  int candidate = 0;
  double q = 0.0;
  dgcg::Action action = dgcg::Action::Zero();
  double pinch_angle = 0.0;  // rad, pinch axis to the configured alignment target
};

struct GraspPlanResult {
  std::string instruction;
  std::string instruction_source;  // text | audio
  double transcript_confidence = 1.0;
  std::optional<rere::EnrichedExpression> enriched;
  std::string material;
  double mu = 0.0;
  features::FeatureVector feature_vector;
  Vec2 cstar_pixel = Vec2::Zero();
  Vec3 principal_axis = Vec3::Zero();
  std::size_t object_points = 0;
  double affordance = 0.0;
  dgcg::GraspPose nominal = dgcg::GraspPose::Zero();
  dgcg::PinchAlignment pinch_alignment = dgcg::PinchAlignment::Parallel;
  std::uint64_t seed = 0;
  int sampled = 0;
  int survivors = 0;
  int force_closure = 0;
  std::vector<RankedOption> top;
  int best = 0;  // index into top
  double motion_cost = 0.0;
  motion::ArmJoints arm_goal = motion::ArmJoints::Zero();
  int waypoints = 0;
  std::vector<std::pair<std::string, double>> timing_ms;

  const RankedOption& best_option() const { return top.at(static_cast<std::size_t>(best)); }

  /// Result document; timing is left out unless asked for, which keeps the
  /// document byte-identical across runs.
  Json to_json(bool with_timing = false) const {
    auto vec = [](const auto& v) {
      std::vector<double> out(static_cast<std::size_t>(v.size()));
      for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v[i];
      return out;
    };
    Json j;
    j["instruction"] = {{"text", instruction}, {"source", instruction_source}, {"confidence", transcript_confidence}};
    if (enriched)
      j["enriched"] = {{"text", enriched->text},
                       {"alignment", enriched->alignment},
                       {"included", enriched->included},
                       {"features", rere::to_json(enriched->features)}};
    else
      j["enriched"] = nullptr;
    j["material"] = material;
    j["mu"] = mu;
    j["features"] = {{"origin", vec(feature_vector.origin)},
                     {"direction", vec(feature_vector.direction)},
                     {"tangent_2d", vec(feature_vector.tangent2d)},
                     {"cstar_pixel", vec(cstar_pixel)},
                     {"principal_axis", vec(principal_axis)},
                     {"object_points", object_points}};
    j["affordance"] = affordance;
    j["nominal_pose"] = vec(nominal);
    j["pinch_alignment"] = dgcg::to_string(pinch_alignment);
    j["seed"] = seed;
    j["candidates"] = {{"sampled", sampled}, {"survivors", survivors}, {"force_closure", force_closure}};
    Json top3 = Json::array();
    for (const auto& o : top)
      top3.push_back({{"candidate", o.candidate},
                      {"q", o.q},
                      {"action", vec(o.action)},
                      {"pinch_angle_deg", o.pinch_angle * 180.0 / kPi}});
    j["top3"] = top3;
    j["best"] = {{"rank", best},
                 {"candidate", best_option().candidate},
                 {"action", vec(best_option().action)},
                 {"motion_cost", motion_cost},
                 {"arm_goal", vec(arm_goal)},
                 {"waypoints", waypoints}};
    if (with_timing) {
      Json t = Json::object();
      for (const auto& [name, ms] : timing_ms) t[name] = ms;
      j["timing_ms"] = t;
    }
    return j;
  }
};

/// Angle between the pinch axis of a hand pose and `target`, sign-free.
inline double pinch_axis_angle(const dgcg::GraspPose& pose, const hand::HandConfig& hand, const Vec3& target) {
  const Vec3 axis = pose_to_transform(pose).linear() * hand.pinch_direction();
  const double a = angle_between(axis, target);
  return std::min(a, kPi - a);
}

/// Runs every stage. `clock` names the stage a thrown error came from.
inline GraspPlanResult run_plan(const PipelineConfig& cfg, const Instruction& in, StageClock& clock) {
  GraspPlanResult r;
  clock.begin("config");
  cfg.validate();
  if (in.text.has_value() == in.audio.has_value()) throw ConfigError("give exactly one of instruction text or audio");
  const hand::HandConfig hand = hand::load_hand_config(cfg.hand);
  const Json arm_doc = load_json(cfg.arm);
  const motion::ArmConfig arm = motion::load_arm_config(arm_doc);
  const motion::SelectionParams selection = motion::load_selection_params(arm_doc, arm.ik);
  const dgr::FrictionTable friction = dgr::FrictionTable::load(cfg.friction);
  const rere::PromptTemplate prompts = rere::PromptTemplate::load(cfg.prompts);
  Providers providers = make_providers(cfg.providers);

  clock.begin("scene");
  const scene::SceneFrame frame = load_scene(cfg.scene);

  clock.begin("rere");
  rere::Transcript transcript;
  if (in.audio) {
    if (!providers.asr) throw ConfigError("audio input needs a transcription provider (set DEXGRASP_ASR_URL)");
    transcript = rere::transcribe_audio(rere::load_wav(*in.audio), *providers.asr, cfg.rere.audio);
    r.instruction_source = "audio";
  } else {
    transcript = {*in.text, 1.0};
    r.instruction_source = "text";
  }
  r.instruction = transcript.text;
  r.transcript_confidence = transcript.confidence;
  if (cfg.rere.enabled || in.audio) {
    if (!providers.vlm) throw ConfigError("enrichment needs a vision-language provider (set DEXGRASP_VLM_URL)");
    r.enriched = rere::enrich(transcript, frame.rgb, *providers.vlm, prompts, cfg.rere);
  }
  const std::string material_text = r.enriched && !r.enriched->features.material.empty()
                                        ? r.enriched->features.material
                                        : transcript.text;
  r.material = friction.match(material_text);
  r.mu = friction.mu(r.material);

  clock.begin("features");
  const Perception per = perceive(frame, cfg);
  r.feature_vector = per.features.vector;
  r.cstar_pixel = Vec2(per.features.cstar.pixel.x, per.features.cstar.pixel.y);
  r.principal_axis = per.features.axes.first();
  r.object_points = per.object.size();

  clock.begin("dgcg");
  const hand::IndexedCloud object(per.object);
  r.pinch_alignment = cfg.pinch_alignment;
  r.nominal = dgcg::nominal_pose(per.features.vector, hand, cfg.pinch_alignment, cfg.tilt, cfg.standoff);
  double k_o = cfg.affordance_floor;
  try {
    const auto s = hand::intersect_object(hand::place_hand(hand, pose_to_transform(r.nominal)), object,
                                          cfg.contact_tolerance);
    k_o = dgcg::affordance(s, per.features.vector.origin, r.mu, cfg.affordance);
  } catch (const NoIntersection&) {
  } catch (const NoContacts&) {
  }
  r.affordance = std::clamp(k_o, cfg.affordance_floor, 1.0);
  r.seed = cfg.seed;
  const auto samples = dgcg::sample_candidates(r.nominal, r.affordance, cfg.samples, cfg.seed, cfg.sampler);
  const auto candidates = dgcg::assemble(samples, hand, object, cfg.contact_tolerance);
  r.sampled = cfg.samples;
  r.survivors = static_cast<int>(candidates.size());

  clock.begin("dgr");
  const auto ranking = dgr::rank_candidates(candidates, r.mu, per.centroid, cfg.edges, cfg.keep, cfg.metric);
  r.force_closure = static_cast<int>(
      std::count_if(ranking.scores.begin(), ranking.scores.end(), [](const auto& s) { return s.force_closure; }));
  const Vec3 target = dgcg::pinch_target(per.features.vector.direction, cfg.pinch_alignment);
  std::vector<motion::GraspOption> options;
  for (const auto& t : ranking.top) {
    const auto& c = candidates[static_cast<std::size_t>(t.candidate)];
    r.top.push_back({t.candidate, t.score.q, c.action, pinch_axis_angle(c.pose, hand, target)});
    options.push_back({c.pose, t.score.q});
  }

  clock.begin("motion");
  const scene::PointCloud obstacles = background_obstacles(frame, cfg.obstacle_voxel);
  std::optional<KdTree> tree;
  if (!obstacles.points.empty()) tree.emplace(obstacles.points);
  const auto plan =
      motion::select_best(options, arm.model, arm.home, arm.flange_in_hand, tree ? &*tree : nullptr, selection);
  r.best = plan.option;
  r.motion_cost = plan.cost;
  r.arm_goal = plan.goal;
  r.waypoints = static_cast<int>(plan.trajectory.waypoints.size());
  clock.close();
  r.timing_ms = clock.timings();
  return r;
}

inline GraspPlanResult run_plan(const PipelineConfig& cfg, const Instruction& in) {
  StageClock clock;
  return run_plan(cfg, in, clock);
}

}  // namespace dexgrasp::pipeline
