// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/core/geometry.hpp"
#include "dexgrasp/core/random.hpp"
#include "dexgrasp/features/feature_vector.hpp"
#include "dexgrasp/hand/hand_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace dexgrasp::dgcg {

using hand::HandConfig;
using hand::IntersectionSet;
using hand::JointVector;

/// Position (camera frame) followed by intrinsic XYZ Euler angles.
using GraspPose = Vec6;
using Action = Eigen::Matrix<double, 12, 1>;

struct GraspCandidate {
  int sample_index = 0;  // position in the sample list it was assembled from
  GraspPose pose = GraspPose::Zero();
  JointVector joints = JointVector::Zero();
  IntersectionSet contacts;
  Action action = Action::Zero();  // pose followed by joints
};

enum class PinchAlignment { Parallel, Perpendicular };

inline PinchAlignment pinch_alignment_from_string(const std::string& s) {
  if (s == "parallel") return PinchAlignment::Parallel;
  if (s == "perpendicular") return PinchAlignment::Perpendicular;
  throw ValidationError("pinch_alignment must be parallel|perpendicular, got '" + s + "'");
}

inline std::string to_string(PinchAlignment a) { return a == PinchAlignment::Parallel ? "parallel" : "perpendicular"; }

/// Direction the pinch axis is aligned with. Perpendicular mode crosses the
/// feature direction with the viewing axis so the pinch spans the object as
/// seen from the camera.
inline Vec3 pinch_target(const Vec3& feature_dir, PinchAlignment mode, const Vec3& view_axis = Vec3::UnitZ()) {
  if (mode == PinchAlignment::Parallel) return feature_dir.normalized();
  Vec3 t = view_axis.cross(feature_dir);
  if (t.norm() < 1e-9) t = tangent_basis(feature_dir.normalized()).first;
  return t.normalized();
}

/// Hand pose whose pinch axis is parallel to `target`, followed by a tilt about
/// the pinch axis. The pinch axis is unoriented, so the rotation onto +target
/// or -target with the smaller angle is used. The pinch midpoint is placed at
/// `origin`, backed off by `standoff` along the hand approach direction.
inline GraspPose nominal_pose(const Vec3& origin, const Vec3& target, const HandConfig& cfg, double tilt,
                              double standoff) {
  const Vec3 d = cfg.pinch_direction();
  const Vec3 t = target.normalized();
  const Vec3 goal = angle_between(d, t) <= angle_between(d, -t) ? t : Vec3(-t);
  const Mat3 r = minimal_rotation(d, goal) * Eigen::AngleAxisd(tilt, d).toRotationMatrix();
  Transform pose = Transform::Identity();
  pose.linear() = r;
  pose.translation() = origin - r * cfg.pinch_midpoint() - standoff * (r * HandConfig::approach());
  return transform_to_pose(pose);
}

inline GraspPose nominal_pose(const features::FeatureVector& fv, const HandConfig& cfg, PinchAlignment mode,
                              double tilt = 0.0, double standoff = 0.0) {
  return nominal_pose(fv.origin, pinch_target(fv.direction, mode), cfg, tilt, standoff);
}

struct AffordanceParams {
  double d_max = 0.3;       // distance scale of the centering term (m)
  double steepness = 8.0;   // logistic slope
  double midpoint = 0.5;    // logistic center
};

/// True when the segment a-b lies inside both friction cones (inward normals
/// na at a and nb at b, half-angle atan(mu)).
inline bool opposed(const Vec3& a, const Vec3& na, const Vec3& b, const Vec3& nb, double mu) {
  const Vec3 d = b - a;
  if (d.norm() < 1e-12) return false;
  const double half = std::atan(mu);
  return angle_between(na, d) <= half && angle_between(nb, -d) <= half;
}

/// Raw three-term grasp score in [0, 1]: finger coverage, best thumb opposition
/// and centering of the contact centroid on the feature origin.
inline double affordance_raw(const IntersectionSet& s, const Vec3& origin, double mu, const AffordanceParams& p = {}) {
  if (s.empty()) throw NoContacts("affordance of an empty intersection");
  const double coverage = static_cast<double>(s.fingers.size()) / hand::kFingers;

  // fingers opposed by the best thumb point, counted out of all four fingers so
  // that an extra non-opposed contact cannot lower the term
  int best = 0;
  for (const auto& t : s.thumb_curve) {
    int n = 0;
    for (const auto& f : s.fingers) n += opposed(f.point, f.normal, t.point, t.normal, mu);
    best = std::max(best, n);
  }
  const double opposition = static_cast<double>(best) / hand::kFingers;

  Vec3 c = Vec3::Zero();
  int k = 0;
  for (const auto& f : s.fingers) {
    c += f.point;
    ++k;
  }
  if (s.thumb_target >= 0) {
    c += s.thumb_curve[static_cast<std::size_t>(s.thumb_target)].point;
    ++k;
  }
  c /= static_cast<double>(k);
  const double centering = 1.0 - std::clamp((c - origin).norm() / p.d_max, 0.0, 1.0);
  return (coverage + opposition + centering) / 3.0;
}

/// K_o = logistic squashing of the raw score into (0, 1).
inline double affordance(const IntersectionSet& s, const Vec3& origin, double mu, const AffordanceParams& p = {}) {
  return 1.0 / (1.0 + std::exp(-p.steepness * (affordance_raw(s, origin, mu, p) - p.midpoint)));
}

struct SamplerParams {
  double sigma_position = 0.01;  // m
  double sigma_rotation = 0.1;   // rad
};

/// n draws from N(nominal, (1/K_o) diag(sp^2 x3, sr^2 x3)). Draw i uses its own
/// random stream, so the list does not depend on evaluation order.
inline std::vector<GraspPose> sample_candidates(const GraspPose& nominal, double k_o, int n, std::uint64_t seed,
                                                const SamplerParams& p = {}) {
  if (n < 1) throw ValidationError("sample count must be >= 1");
  if (!(k_o > 0.0 && k_o <= 1.0)) throw ValidationError("affordance must be in (0, 1]");
  const double scale = 1.0 / std::sqrt(k_o);
  std::vector<GraspPose> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Rng rng(stream_seed(seed, static_cast<std::uint64_t>(i)));
    GraspPose m = nominal;
    for (int j = 0; j < 6; ++j) m[j] += scale * (j < 3 ? p.sigma_position : p.sigma_rotation) * rng.normal();
    for (int j = 3; j < 6; ++j) m[j] = wrap_angle(m[j]);
    out[static_cast<std::size_t>(i)] = m;
  }
  return out;
}

/// Places the hand at every sample, intersects it with the object and solves
/// finger IK. Samples that miss the object or whose thumb target falls off the
/// joint map are dropped.
inline std::vector<GraspCandidate> assemble(const std::vector<GraspPose>& samples, const HandConfig& cfg,
                                            const hand::IndexedCloud& object, double tol) {
  std::vector<GraspCandidate> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    GraspCandidate c;
    c.sample_index = static_cast<int>(i);
    c.pose = samples[i];
    try {
      c.contacts = hand::intersect_object(hand::place_hand(cfg, pose_to_transform(c.pose)), object, tol);
      c.joints = hand::finger_ik(cfg, c.contacts);
    } catch (const NoIntersection&) {
      continue;
    } catch (const OutOfRange&) {
      continue;
    }
    c.action << c.pose, c.joints;
    out.push_back(std::move(c));
  }
  if (out.empty()) throw NoCandidates("no sample reached the object");
  return out;
}

}  // namespace dexgrasp::dgcg
