// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/core/geometry.hpp"
#include "dexgrasp/core/json_util.hpp"
#include "dexgrasp/core/kdtree.hpp"
#include "dexgrasp/scene/types.hpp"

#include <array>
#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dexgrasp::hand {

inline constexpr int kFingers = 4;
inline constexpr int kJoints = 6;  // 4 finger flexions + 2 thumb angles
inline constexpr int kFingerSamples = 32;

using JointVector = Vec6;
using JointLimits = std::array<std::pair<double, double>, kJoints>;

/// Sampled fingertip path of one finger, hand frame.
struct FingerPath {
  Transform base = Transform::Identity();
  std::vector<double> angles;  // strictly increasing
  std::vector<Vec3> points;    // fingertip at each angle

  /// Fingertip at an arbitrary angle by linear interpolation along the path.
  Vec3 tip(double angle) const {
    if (angle <= angles.front()) return points.front();
    if (angle >= angles.back()) return points.back();
    const auto hi = static_cast<std::size_t>(std::upper_bound(angles.begin(), angles.end(), angle) - angles.begin());
    const std::size_t lo = hi - 1;
    const double s = (angle - angles[lo]) / (angles[hi] - angles[lo]);
    return (1.0 - s) * points[lo] + s * points[hi];
  }

  double max_segment() const {
    double m = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) m = std::max(m, (points[i] - points[i - 1]).norm());
    return m;
  }
};

/// Planar two-angle thumb workspace. Plane coordinates (u, v) are measured
/// from `origin` along `u_axis` and `v_axis = normal x u_axis`. The joint map
/// is a grid of plane coordinates indexed [i1 * n2 + i2].
struct ThumbWorkspace {
  Vec3 origin = Vec3::Zero();
  Vec3 normal = Vec3::UnitY();
  Vec3 u_axis = Vec3::UnitX();
  Vec3 v_axis = Vec3::UnitZ();
  double t1_min = 0, t1_max = 1, t2_min = 0, t2_max = 1;
  int n1 = 2, n2 = 2;
  std::vector<Vec2> grid;
  std::vector<Vec2> polygon;  // image of the grid boundary, counter-clockwise in (u, v)

  const Vec2& node(int i1, int i2) const { return grid[static_cast<std::size_t>(i1 * n2 + i2)]; }
  double step1() const { return (t1_max - t1_min) / (n1 - 1); }
  double step2() const { return (t2_max - t2_min) / (n2 - 1); }

  Vec3 to_space(const Vec2& uv) const { return origin + uv.x() * u_axis + uv.y() * v_axis; }
  Vec2 to_plane(const Vec3& p) const { return {(p - origin).dot(u_axis), (p - origin).dot(v_axis)}; }
  double plane_distance(const Vec3& p) const { return (p - origin).dot(normal); }

  /// Bilinear interpolation of the joint map.
  Vec2 forward(double t1, double t2) const {
    const double f1 = std::clamp((t1 - t1_min) / step1(), 0.0, static_cast<double>(n1 - 1));
    const double f2 = std::clamp((t2 - t2_min) / step2(), 0.0, static_cast<double>(n2 - 1));
    const int i = std::min(static_cast<int>(f1), n1 - 2), j = std::min(static_cast<int>(f2), n2 - 2);
    const double s = f1 - i, t = f2 - j;
    return (1 - s) * (1 - t) * node(i, j) + s * (1 - t) * node(i + 1, j) + (1 - s) * t * node(i, j + 1) +
           s * t * node(i + 1, j + 1);
  }

  /// Joint angles whose bilinear image is uv, or nothing when uv lies outside
  /// every grid cell. Cells are scanned in index order.
  std::optional<Vec2> inverse(const Vec2& uv) const {
    double scale = 0.0;
    for (const auto& g : grid) scale = std::max(scale, g.norm());
    const double tol = 1e-9;
    for (int i = 0; i + 1 < n1; ++i) {
      for (int j = 0; j + 1 < n2; ++j) {
        const Vec2 &a = node(i, j), &b = node(i + 1, j), &c = node(i, j + 1), &d = node(i + 1, j + 1);
        const Vec2 lo = a.cwiseMin(b).cwiseMin(c).cwiseMin(d), hi = a.cwiseMax(b).cwiseMax(c).cwiseMax(d);
        if ((uv.array() < lo.array() - tol * scale).any() || (uv.array() > hi.array() + tol * scale).any()) continue;
        // Newton on P(s, t) = uv
        Vec2 st(0.5, 0.5);
        for (int it = 0; it < 30; ++it) {
          const double s = st.x(), t = st.y();
          const Vec2 p = (1 - s) * (1 - t) * a + s * (1 - t) * b + (1 - s) * t * c + s * t * d;
          Eigen::Matrix2d jac;
          jac.col(0) = (1 - t) * (b - a) + t * (d - c);
          jac.col(1) = (1 - s) * (c - a) + s * (d - b);
          const Vec2 r = p - uv;
          if (r.norm() <= 1e-14 * std::max(scale, 1.0)) break;
          st -= jac.fullPivLu().solve(r);
        }
        const double s = st.x(), t = st.y();
        const Vec2 p = (1 - s) * (1 - t) * a + s * (1 - t) * b + (1 - s) * t * c + s * t * d;
        if (s < -tol || s > 1 + tol || t < -tol || t > 1 + tol || (p - uv).norm() > 1e-9 * std::max(scale, 1e-3))
          continue;
        return Vec2(t1_min + (i + std::clamp(s, 0.0, 1.0)) * step1(), t2_min + (j + std::clamp(t, 0.0, 1.0)) * step2());
      }
    }
    return std::nullopt;
  }

  bool inside_polygon(const Vec2& uv) const {
    bool in = false;
    for (std::size_t i = 0, j = polygon.size() - 1; i < polygon.size(); j = i++) {
      const Vec2 &a = polygon[i], &b = polygon[j];
      if ((a.y() > uv.y()) != (b.y() > uv.y()) &&
          uv.x() < (b.x() - a.x()) * (uv.y() - a.y()) / (b.y() - a.y()) + a.x())
        in = !in;
    }
    return in;
  }

  void build_polygon() {
    polygon.clear();
    for (int i = 0; i < n1; ++i) polygon.push_back(node(i, 0));
    for (int j = 1; j < n2; ++j) polygon.push_back(node(n1 - 1, j));
    for (int i = n1 - 2; i >= 0; --i) polygon.push_back(node(i, n2 - 1));
    for (int j = n2 - 2; j >= 1; --j) polygon.push_back(node(0, j));
    double area = 0.0;
    for (std::size_t i = 0, j = polygon.size() - 1; i < polygon.size(); j = i++)
      area += polygon[j].x() * polygon[i].y() - polygon[i].x() * polygon[j].y();
    if (area < 0.0) std::reverse(polygon.begin(), polygon.end());
  }
};

struct HandConfig {
  std::array<FingerPath, kFingers> fingers;
  ThumbWorkspace thumb;
  JointLimits limits{};
  Vec3 pinch_a = Vec3::Zero(), pinch_b = Vec3::UnitX();

  Vec3 pinch_direction() const { return (pinch_b - pinch_a).normalized(); }
  Vec3 pinch_midpoint() const { return 0.5 * (pinch_a + pinch_b); }
  /// Hand-frame approach direction; standoff moves the hand along its negative.
  static Vec3 approach() { return Vec3::UnitZ(); }

  JointVector open_joints() const {
    JointVector h;
    for (int i = 0; i < kJoints; ++i) h[i] = limits[static_cast<std::size_t>(i)].first;
    return h;
  }
  bool within_limits(const JointVector& h, double slack = 1e-12) const {
    for (int i = 0; i < kJoints; ++i) {
      const auto [lo, hi] = limits[static_cast<std::size_t>(i)];
      if (!(h[i] >= lo - slack && h[i] <= hi + slack)) return false;
    }
    return true;
  }
};

namespace detail {

inline Vec3 vec3(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) throw ValidationError(field + ": expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline Transform rigid(const Json& j, const std::string& field) {
  Transform t = Transform::Identity();
  t.translation() = vec3(require<Json>(j, "translation"), field + ".translation");
  t.linear() = euler_xyz_to_matrix(vec3(optional<Json>(j, "rpy", Json::array({0, 0, 0})), field + ".rpy"));
  return t;
}

/// Uniform-angle resampling of a denser polyline.
inline void resample(FingerPath& f, int n) {
  if (static_cast<int>(f.angles.size()) <= n) return;
  FingerPath out = f;
  out.angles.clear();
  out.points.clear();
  const double lo = f.angles.front(), hi = f.angles.back();
  for (int i = 0; i < n; ++i) {
    const double a = lo + (hi - lo) * i / (n - 1);
    out.angles.push_back(a);
    out.points.push_back(f.tip(a));
  }
  f = std::move(out);
}

}  // namespace detail

/// Parses and validates a hand description. Finger polyline points are given
/// in each finger's base frame and stored in the hand frame.
inline HandConfig load_hand_config(const Json& doc) {
  HandConfig cfg;
  const Json fingers = require<Json>(doc, "fingers");
  if (!fingers.is_array() || fingers.size() != kFingers) throw ValidationError("fingers: expected 4 entries");

  const Json limits = require<Json>(doc, "joint_limits");
  if (!limits.is_array() || limits.size() != kJoints) throw ValidationError("joint_limits: expected 6 pairs");
  for (int i = 0; i < kJoints; ++i) {
    const Json& l = limits[static_cast<std::size_t>(i)];
    if (!l.is_array() || l.size() != 2 || !(l[0].get<double>() < l[1].get<double>()))
      throw ValidationError("joint_limits[" + std::to_string(i) + "]: expected [lo, hi] with lo < hi");
    cfg.limits[static_cast<std::size_t>(i)] = {l[0].get<double>(), l[1].get<double>()};
  }

  for (int f = 0; f < kFingers; ++f) {
    const std::string name = "fingers[" + std::to_string(f) + "]";
    const Json& fj = fingers[static_cast<std::size_t>(f)];
    FingerPath& path = cfg.fingers[static_cast<std::size_t>(f)];
    path.base = detail::rigid(require<Json>(fj, "base"), name + ".base");
    path.angles = require<std::vector<double>>(fj, "angles");
    const Json pts = require<Json>(fj, "points");
    if (pts.size() != path.angles.size() || path.angles.size() < 2)
      throw ValidationError(name + ".points: need one point per angle and at least 2 samples");
    for (std::size_t i = 0; i < pts.size(); ++i) path.points.push_back(path.base * detail::vec3(pts[i], name + ".points"));
    const auto [lo, hi] = cfg.limits[static_cast<std::size_t>(f)];
    for (std::size_t i = 0; i < path.angles.size(); ++i) {
      if (i > 0 && !(path.angles[i] > path.angles[i - 1]))
        throw ValidationError(name + ".angles: not strictly increasing");
      if (path.angles[i] < lo - 1e-12 || path.angles[i] > hi + 1e-12)
        throw ValidationError(name + ".angles: outside joint limits");
    }
    detail::resample(path, kFingerSamples);
  }

  const Json tj = require<Json>(doc, "thumb");
  ThumbWorkspace& th = cfg.thumb;
  th.origin = detail::vec3(require<Json>(tj, "plane_point"), "thumb.plane_point");
  th.normal = detail::vec3(require<Json>(tj, "plane_normal"), "thumb.plane_normal");
  th.u_axis = detail::vec3(require<Json>(tj, "u_axis"), "thumb.u_axis");
  if (th.normal.norm() < 1e-9) throw ValidationError("thumb.plane_normal: zero length");
  th.normal.normalize();
  th.u_axis -= th.u_axis.dot(th.normal) * th.normal;
  if (th.u_axis.norm() < 1e-9) throw ValidationError("thumb.u_axis: parallel to the plane normal");
  th.u_axis.normalize();
  th.v_axis = th.normal.cross(th.u_axis);
  auto range = [&](const char* key, double& lo, double& hi, int& n) {
    const Json r = require<Json>(tj, key);
    lo = require<double>(r, "min");
    hi = require<double>(r, "max");
    n = require<int>(r, "count");
    if (!(lo < hi) || n < 2) throw ValidationError(std::string("thumb.") + key + ": bad range");
  };
  range("theta1", th.t1_min, th.t1_max, th.n1);
  range("theta2", th.t2_min, th.t2_max, th.n2);
  const Json grid = require<Json>(tj, "grid");
  if (!grid.is_array() || grid.size() != static_cast<std::size_t>(th.n1 * th.n2))
    throw ValidationError("thumb.grid: expected theta1.count * theta2.count entries");
  for (const auto& g : grid) {
    if (!g.is_array() || g.size() != 2) throw ValidationError("thumb.grid: entries must be [u, v]");
    th.grid.emplace_back(g[0].get<double>(), g[1].get<double>());
  }
  th.build_polygon();
  const auto [l1, h1] = cfg.limits[4];
  const auto [l2, h2] = cfg.limits[5];
  if (th.t1_min < l1 - 1e-12 || th.t1_max > h1 + 1e-12 || th.t2_min < l2 - 1e-12 || th.t2_max > h2 + 1e-12)
    throw ValidationError("thumb grid exceeds the thumb joint limits");

  const Json pinch = require<Json>(doc, "pinch_axis");
  if (!pinch.is_array() || pinch.size() != 2) throw ValidationError("pinch_axis: expected two points");
  cfg.pinch_a = detail::vec3(pinch[0], "pinch_axis[0]");
  cfg.pinch_b = detail::vec3(pinch[1], "pinch_axis[1]");
  if ((cfg.pinch_b - cfg.pinch_a).norm() <= 1e-9) throw ValidationError("pinch_axis: zero length");
  return cfg;
}

inline HandConfig load_hand_config(const std::filesystem::path& path) { return load_hand_config(load_json(path)); }

/// Hand workspace placed in the camera frame.
struct PosedHand {
  const HandConfig* config = nullptr;
  Transform pose = Transform::Identity();
  std::array<std::vector<Vec3>, kFingers> finger_points;
  Vec3 thumb_origin, thumb_normal, thumb_u, thumb_v;
  Vec3 pinch_a, pinch_b;

  Vec2 to_thumb_plane(const Vec3& p) const { return {(p - thumb_origin).dot(thumb_u), (p - thumb_origin).dot(thumb_v)}; }
};

inline PosedHand place_hand(const HandConfig& cfg, const Transform& pose) {
  PosedHand ph;
  ph.config = &cfg;
  ph.pose = pose;
  for (int f = 0; f < kFingers; ++f)
    for (const auto& p : cfg.fingers[static_cast<std::size_t>(f)].points)
      ph.finger_points[static_cast<std::size_t>(f)].push_back(pose * p);
  ph.thumb_origin = pose * cfg.thumb.origin;
  ph.thumb_normal = pose.linear() * cfg.thumb.normal;
  ph.thumb_u = pose.linear() * cfg.thumb.u_axis;
  ph.thumb_v = pose.linear() * cfg.thumb.v_axis;
  ph.pinch_a = pose * cfg.pinch_a;
  ph.pinch_b = pose * cfg.pinch_b;
  return ph;
}

struct FingerContact {
  Vec3 point;
  Vec3 normal;  // inward (into the object)
  int finger = 0;
  int sample = 0;
  double angle = 0.0;
};

struct ThumbPoint {
  Vec3 point;
  Vec3 normal;  // inward
  Vec2 plane_uv;
};

struct IntersectionSet {
  std::vector<FingerContact> fingers;
  std::vector<ThumbPoint> thumb_curve;  // ordered by plane coordinate (u, then v)
  int thumb_target = -1;                // thumb-curve point nearest the pinch axis

  bool empty() const { return fingers.empty() && thumb_curve.empty(); }
};

/// Target cloud with normals and a search index.
struct IndexedCloud {
  const scene::PointCloud* cloud = nullptr;
  KdTree tree;

  explicit IndexedCloud(const scene::PointCloud& c) : cloud(&c), tree(c.points) {
    if (!c.has_normals()) throw ValidationError("cloud needs normals");
  }
};

inline double segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  const double t = std::clamp((p - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

/// Workspace/object intersection. Each finger contacts at the first sample
/// of its sweep (from open to closed) whose nearest cloud point is within
/// tol; the thumb curve is the set of cloud points within tol of the thumb
/// plane whose projection falls inside the thumb polygon.
inline IntersectionSet intersect_object(const PosedHand& hand, const IndexedCloud& obj, double tol) {
  IntersectionSet out;
  const auto& cloud = *obj.cloud;
  for (int f = 0; f < kFingers; ++f) {
    const auto& pts = hand.finger_points[static_cast<std::size_t>(f)];
    for (std::size_t s = 0; s < pts.size(); ++s) {
      const auto nn = obj.tree.knn(pts[s], 1);
      const auto i = static_cast<std::size_t>(nn.front());
      if ((cloud.points[i] - pts[s]).norm() <= tol) {
        out.fingers.push_back({cloud.points[i], -cloud.normals[i], f, static_cast<int>(s),
                               hand.config->fingers[static_cast<std::size_t>(f)].angles[s]});
        break;
      }
    }
  }
  const ThumbWorkspace& th = hand.config->thumb;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.points[i];
    if (std::abs((p - hand.thumb_origin).dot(hand.thumb_normal)) > tol) continue;
    const Vec2 uv = hand.to_thumb_plane(p);
    if (!th.inside_polygon(uv)) continue;
    out.thumb_curve.push_back({p, -cloud.normals[i], uv});
  }
  std::stable_sort(out.thumb_curve.begin(), out.thumb_curve.end(), [](const ThumbPoint& a, const ThumbPoint& b) {
    return a.plane_uv.x() < b.plane_uv.x() || (a.plane_uv.x() == b.plane_uv.x() && a.plane_uv.y() < b.plane_uv.y());
  });
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.thumb_curve.size(); ++i) {
    const double d = segment_distance(out.thumb_curve[i].point, hand.pinch_a, hand.pinch_b);
    if (d < best) {
      best = d;
      out.thumb_target = static_cast<int>(i);
    }
  }
  if (out.empty()) throw NoIntersection("hand workspace does not reach the object");
  return out;
}

/// Joint vector reproducing an intersection: matched sample angles for the
/// contacted fingers, open limits for the rest, and the thumb joint map
/// inverted at the thumb target.
inline JointVector finger_ik(const HandConfig& cfg, const IntersectionSet& s) {
  if (s.empty()) throw NoContacts("empty intersection");
  JointVector h = cfg.open_joints();
  for (const auto& c : s.fingers) h[c.finger] = c.angle;
  if (s.thumb_target >= 0) {
    const auto& target = s.thumb_curve[static_cast<std::size_t>(s.thumb_target)];
    const auto angles = cfg.thumb.inverse(target.plane_uv);
    if (!angles) throw OutOfRange("thumb target outside the thumb joint map");
    h[4] = angles->x();
    h[5] = angles->y();
  }
  return h;
}

/// Fingertips (4 fingers, then thumb) in the hand frame.
inline std::array<Vec3, 5> finger_fk(const HandConfig& cfg, const JointVector& h) {
  if (!cfg.within_limits(h)) throw JointLimit("joint vector outside limits");
  std::array<Vec3, 5> tips;
  for (int f = 0; f < kFingers; ++f) tips[static_cast<std::size_t>(f)] = cfg.fingers[static_cast<std::size_t>(f)].tip(h[f]);
  tips[4] = cfg.thumb.to_space(cfg.thumb.forward(h[4], h[5]));
  return tips;
}

}  // namespace dexgrasp::hand
