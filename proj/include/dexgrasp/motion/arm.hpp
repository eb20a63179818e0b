// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/core/geometry.hpp"
#include "dexgrasp/core/json_util.hpp"

#include <array>
#include <cmath>
#include <filesystem>
#include <string>
#include <utility>

namespace dexgrasp::motion {

using ArmJoints = Vec6;

/// Standard Denavit-Hartenberg row: Rz(theta + offset) Tz(d) Tx(a) Rx(alpha).
struct DhRow {
  double a = 0.0;
  double alpha = 0.0;
  double d = 0.0;
  double theta_offset = 0.0;

  Transform transform(double theta) const {
    const double ct = std::cos(theta + theta_offset), st = std::sin(theta + theta_offset);
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    Transform t = Transform::Identity();
    t.matrix() << ct, -st * ca, st * sa, a * ct,  //
        st, ct * ca, -ct * sa, a * st,            //
        0, sa, ca, d,                             //
        0, 0, 0, 1;
    return t;
  }
};

struct IkParams {
  double damping = 0.01;
  int max_iterations = 200;
  double position_tol = 1e-4;     // m
  double orientation_tol = 1e-3;  // rad
  double orientation_weight = 0.5;  // m per rad in the error norm
  double max_step = 0.5;            // rad, largest joint change per iteration
  int stall_window = 20;            // iterations without progress before a kick
  double kick = 0.3;                // rad
};

struct ArmModel {
  std::array<DhRow, 6> dh;
  std::array<std::pair<double, double>, 6> limits;
  Transform base_pose = Transform::Identity();  // camera <- base
  double workspace_radius = 1.0;                // targets farther from the base are rejected

  bool within_limits(const ArmJoints& j, double slack = 1e-12) const {
    for (int i = 0; i < 6; ++i)
      if (!(j[i] >= limits[static_cast<std::size_t>(i)].first - slack &&
            j[i] <= limits[static_cast<std::size_t>(i)].second + slack))
        return false;
    return true;
  }

  ArmJoints clamp(ArmJoints j) const {
    for (int i = 0; i < 6; ++i)
      j[i] = std::clamp(j[i], limits[static_cast<std::size_t>(i)].first, limits[static_cast<std::size_t>(i)].second);
    return j;
  }

  void validate() const {
    for (int i = 0; i < 6; ++i) {
      const auto [lo, hi] = limits[static_cast<std::size_t>(i)];
      if (!(lo < hi)) throw ValidationError("arm joint " + std::to_string(i) + ": limits must satisfy lo < hi");
    }
    if (!(workspace_radius > 0.0)) throw ValidationError("workspace_radius must be positive");
  }
};

/// Frames 0..6 in the camera frame (frame 0 is the base).
inline std::array<Transform, 7> arm_frames(const ArmModel& m, const ArmJoints& j) {
  std::array<Transform, 7> f;
  f[0] = m.base_pose;
  for (int i = 0; i < 6; ++i)
    f[static_cast<std::size_t>(i) + 1] = f[static_cast<std::size_t>(i)] * m.dh[static_cast<std::size_t>(i)].transform(j[i]);
  return f;
}

/// Flange pose in the camera frame.
inline Transform arm_fk(const ArmModel& m, const ArmJoints& j) {
  if (!m.within_limits(j)) throw JointLimit("arm joints outside limits");
  return arm_frames(m, j)[6];
}

/// Geometric Jacobian of the flange (linear rows on top), camera frame.
inline Mat6 arm_jacobian(const std::array<Transform, 7>& f) {
  Mat6 jac;
  const Vec3 p = f[6].translation();
  for (int i = 0; i < 6; ++i) {
    const Vec3 z = f[static_cast<std::size_t>(i)].linear().col(2);
    const Vec3 o = f[static_cast<std::size_t>(i)].translation();
    jac.col(i) << z.cross(p - o), z;
  }
  return jac;
}

/// Position error on top, rotation error (axis * angle) below.
inline Vec6 pose_error(const Transform& current, const Transform& target) {
  Vec6 e;
  e << target.translation() - current.translation(), rotation_error(current.linear(), target.linear());
  return e;
}

struct IkResult {
  ArmJoints joints;
  int iterations = 0;
  double position_error = 0.0;
  double orientation_error = 0.0;
};

/// Damped least squares from `seed` on the weighted error (rotation rows
/// scaled by orientation_weight). The damping adapts: it shrinks after an
/// improving step and grows after a rejected one. Every step is clamped to the
/// joint limits. When a window of iterations fails to reduce the error (a stall
/// near a singularity or on the wrong wrist branch), the joints are kicked by a
/// fixed alternating offset; kicks share the iteration budget. Throws
/// NoConvergence carrying the best position plus orientation residual.
inline IkResult arm_ik(const ArmModel& m, const Transform& target, const ArmJoints& seed, const IkParams& p = {}) {
  ArmJoints j = m.clamp(seed);
  auto frames = arm_frames(m, j);
  Vec6 e = pose_error(frames[6], target);
  auto residual = [](const Vec6& v) { return v.head<3>().norm() + v.tail<3>().norm(); };
  auto weighted = [&](Vec6 v) {
    v.tail<3>() *= p.orientation_weight;
    return v;
  };
  auto done = [&](const Vec6& v) {
    return v.head<3>().norm() <= p.position_tol && v.tail<3>().norm() <= p.orientation_tol;
  };
  if ((target.translation() - m.base_pose.translation()).norm() > m.workspace_radius) throw NoConvergence(residual(e));

  double best = residual(e);
  double lambda = p.damping;
  double window_start = weighted(e).norm();
  int kicks = 0;
  int it = 0;
  for (; it < p.max_iterations && !done(e); ++it) {
    Mat6 jac = arm_jacobian(frames);
    jac.bottomRows<3>() *= p.orientation_weight;
    const Vec6 ew = weighted(e);
    const Mat6 jjt = jac * jac.transpose() + lambda * lambda * Mat6::Identity();
    Vec6 dq = jac.transpose() * jjt.ldlt().solve(ew);
    const double big = dq.cwiseAbs().maxCoeff();
    if (big > p.max_step) dq *= p.max_step / big;
    const ArmJoints next = m.clamp(j + dq);
    const auto next_frames = arm_frames(m, next);
    const Vec6 next_e = pose_error(next_frames[6], target);
    if (weighted(next_e).norm() < ew.norm()) {
      j = next;
      frames = next_frames;
      e = next_e;
      best = std::min(best, residual(e));
      lambda = std::max(lambda * 0.5, 1e-6);
    } else {
      lambda = std::min(lambda * 4.0, 10.0);
    }
    if ((it + 1) % p.stall_window == 0) {
      if (weighted(e).norm() > 0.999 * window_start) {
        ++kicks;
        ArmJoints offset;
        for (int i = 0; i < 6; ++i) offset[i] = ((i + kicks) % 2 ? 1.0 : -1.0) * p.kick;
        j = m.clamp(j + offset);
        frames = arm_frames(m, j);
        e = pose_error(frames[6], target);
        lambda = p.damping;
      }
      window_start = weighted(e).norm();
    }
  }
  if (!done(e)) throw NoConvergence(best);
  return {j, it, e.head<3>().norm(), e.tail<3>().norm()};
}

namespace detail {

inline Transform xyz_rpy(const Json& j, const std::string& what) {
  auto xyz = require<std::vector<double>>(j, "xyz");
  auto rpy = require<std::vector<double>>(j, "rpy");
  if (xyz.size() != 3 || rpy.size() != 3) throw ValidationError(what + ": xyz and rpy need 3 values");
  Vec6 m;
  m << xyz[0], xyz[1], xyz[2], rpy[0], rpy[1], rpy[2];
  return pose_to_transform(m);
}

}  // namespace detail

/// Arm, IK and hand mounting parameters from the arm config document.
struct ArmConfig {
  ArmModel model;
  IkParams ik;
  Transform flange_in_hand = Transform::Identity();  // hand <- flange
  ArmJoints home = ArmJoints::Zero();
};

inline ArmConfig load_arm_config(const Json& doc) {
  ArmConfig c;
  const Json dh = require<Json>(doc, "dh");
  if (!dh.is_array() || dh.size() != 6) throw ValidationError("dh: expected 6 rows");
  for (std::size_t i = 0; i < 6; ++i)
    c.model.dh[i] = {require<double>(dh[i], "a"), require<double>(dh[i], "alpha"), require<double>(dh[i], "d"),
                     optional<double>(dh[i], "theta_offset", 0.0)};
  const auto lim = require<std::vector<std::vector<double>>>(doc, "joint_limits");
  if (lim.size() != 6) throw ValidationError("joint_limits: expected 6 pairs");
  for (std::size_t i = 0; i < 6; ++i) {
    if (lim[i].size() != 2) throw ValidationError("joint_limits: expected [lo, hi] pairs");
    c.model.limits[i] = {lim[i][0], lim[i][1]};
  }
  c.model.base_pose = detail::xyz_rpy(require<Json>(doc, "base_pose"), "base_pose");
  c.model.workspace_radius = optional<double>(doc, "workspace_radius", 1.0);
  c.model.validate();
  c.flange_in_hand = detail::xyz_rpy(require<Json>(doc, "flange_in_hand"), "flange_in_hand");
  const auto home = require<std::vector<double>>(doc, "home");
  if (home.size() != 6) throw ValidationError("home: expected 6 joint values");
  c.home = Eigen::Map<const ArmJoints>(home.data());
  if (!c.model.within_limits(c.home)) throw ValidationError("home: outside joint limits");
  if (doc.contains("ik")) {
    const Json& ik = doc["ik"];
    c.ik.damping = optional<double>(ik, "damping", c.ik.damping);
    c.ik.max_iterations = optional<int>(ik, "max_iterations", c.ik.max_iterations);
    c.ik.position_tol = optional<double>(ik, "position_tol", c.ik.position_tol);
    c.ik.orientation_tol = optional<double>(ik, "orientation_tol", c.ik.orientation_tol);
    c.ik.orientation_weight = optional<double>(ik, "orientation_weight", c.ik.orientation_weight);
    c.ik.max_step = optional<double>(ik, "max_step", c.ik.max_step);
    c.ik.stall_window = optional<int>(ik, "stall_window", c.ik.stall_window);
    c.ik.kick = optional<double>(ik, "kick", c.ik.kick);
    if (!(c.ik.damping > 0.0) || c.ik.max_iterations < 1 || !(c.ik.position_tol > 0.0) ||
        !(c.ik.orientation_tol > 0.0) || !(c.ik.orientation_weight > 0.0) || !(c.ik.max_step > 0.0) ||
        c.ik.stall_window < 1 || !(c.ik.kick >= 0.0))
      throw ValidationError("ik: parameters must be positive");
  }
  return c;
}

inline ArmConfig load_arm_config(const std::filesystem::path& path) { return load_arm_config(load_json(path)); }

}  // namespace dexgrasp::motion
