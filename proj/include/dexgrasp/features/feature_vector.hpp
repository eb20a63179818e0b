// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/core/geometry.hpp"
#include "dexgrasp/features/skeleton.hpp"
#include "dexgrasp/scene/back_project.hpp"
#include "dexgrasp/scene/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace dexgrasp::features {

struct CharacteristicCentroid {
  Pixel pixel;
  Vec3 point = Vec3::Zero();
};

struct PrincipalAxes {
  Vec3 eigenvalues = Vec3::Zero();  // descending
  Mat3 eigenvectors = Mat3::Identity();  // column i pairs with eigenvalues[i]
  bool degenerate = false;
  Vec3 first() const { return eigenvectors.col(0); }
};

struct FeatureVector {
  Vec3 origin = Vec3::Zero();
  Vec3 direction = Vec3::UnitX();
  Vec2 tangent2d = Vec2::UnitX();
  double pca_z = 0.0;
  double t_param = 0.0;

  Vec3 at(double t) const { return origin + t * direction; }
};

/// Median of the valid depths in the (2r+1)^2 window around (x, y). The lower
/// median is taken for an even count.
inline double window_median_depth(const scene::DepthImage& depth, int x, int y, int r = 2) {
  std::vector<double> zs;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      if (depth.inside(x + dx, y + dy) && depth.valid(x + dx, y + dy)) zs.push_back(depth(x + dx, y + dy));
  if (zs.empty()) throw NoValidDepth("no valid depth near pixel (" + std::to_string(x) + ", " + std::to_string(y) + ")");
  const auto mid = zs.begin() + static_cast<std::ptrdiff_t>((zs.size() - 1) / 2);
  std::nth_element(zs.begin(), mid, zs.end());
  return *mid;
}

/// Skeleton pixel nearest the pixel centroid (ties: smallest y, then x),
/// lifted to 3-D with the 5x5 median depth.
inline CharacteristicCentroid characteristic_centroid(const Skeleton& skel, const Vec2& centroid,
                                                      const scene::DepthImage& depth,
                                                      const scene::CameraIntrinsics& k) {
  if (skel.pixels.empty()) throw EmptyMask("empty skeleton");
  Pixel best = skel.pixels.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (const Pixel& p : skel.pixels) {
    const double d = (Vec2(p.x, p.y) - centroid).squaredNorm();
    if (d < best_d || (d == best_d && p < best)) {
      best_d = d;
      best = p;
    }
  }
  const double z = window_median_depth(depth, best.x, best.y);
  return {best, Vec3((best.x - k.cx) * z / k.fx, (best.y - k.cy) * z / k.fy, z)};
}

/// Direction of the best-fit line through the skeleton pixels within radius_px
/// of the centroid pixel, sign-canonicalized to T_x > 0 (else T_y > 0).
inline Vec2 skeleton_tangent(const Skeleton& skel, const Pixel& center, double radius_px = 7.0) {
  std::vector<Vec2> near;
  for (const Pixel& p : skel.pixels) {
    const Vec2 d(p.x - center.x, p.y - center.y);
    if (d.norm() <= radius_px) near.push_back(Vec2(p.x, p.y));
  }
  if (near.size() < 2) throw InsufficientSupport("fewer than 2 skeleton pixels near the centroid");
  Vec2 mean = Vec2::Zero();
  for (const auto& p : near) mean += p;
  mean /= static_cast<double>(near.size());
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto& p : near) cov += (p - mean) * (p - mean).transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
  Vec2 t = eig.eigenvectors().col(1).normalized();
  constexpr double kZero = 1e-12;
  if (t.x() < -kZero || (std::abs(t.x()) <= kZero && t.y() < 0.0)) t = -t;
  return t;
}

/// Flip v so that its largest-magnitude component is positive (first index
/// wins a magnitude tie).
inline Vec3 canonical_sign(Vec3 v) {
  int i = 0;
  v.cwiseAbs().maxCoeff(&i);
  return v[i] < 0.0 ? Vec3(-v) : v;
}

inline PrincipalAxes principal_axis(std::span<const Vec3> points) {
  if (points.size() < 3) throw TooFewPoints("principal axis needs at least 3 points");
  Vec3 mean = Vec3::Zero();
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  Mat3 cov = Mat3::Zero();
  for (const auto& p : points) cov += (p - mean) * (p - mean).transpose();
  cov /= static_cast<double>(points.size());
  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  PrincipalAxes ax;
  for (int i = 0; i < 3; ++i) {
    ax.eigenvalues[i] = std::max(0.0, eig.eigenvalues()[2 - i]);
    ax.eigenvectors.col(i) = canonical_sign(eig.eigenvectors().col(2 - i));
  }
  // keep a right-handed frame without touching the first two axes
  if (ax.eigenvectors.determinant() < 0.0) ax.eigenvectors.col(2) = -ax.eigenvectors.col(2);
  ax.degenerate = ax.eigenvalues[0] - ax.eigenvalues[1] <= 1e-9 * ax.eigenvalues[0];
  return ax;
}

/// direction = normalize(T_x, T_y, v1_z) with v1 flipped so that its
/// xy-projection does not oppose the tangent.
inline FeatureVector feature_vector(const CharacteristicCentroid& cstar, const Vec2& tangent, const PrincipalAxes& axes) {
  Vec3 v1 = axes.first();
  if (v1.head<2>().dot(tangent) < 0.0) v1 = -v1;
  const Vec3 raw(tangent.x(), tangent.y(), v1.z());
  if (raw.norm() < 1e-9) throw ZeroDirection("feature direction vanishes");
  FeatureVector fv;
  fv.origin = cstar.point;
  fv.direction = raw.normalized();
  fv.tangent2d = tangent;
  fv.pca_z = v1.z();
  return fv;
}

struct ObjectFeatures {
  Skeleton skeleton;
  Vec2 pixel_centroid = Vec2::Zero();
  CharacteristicCentroid cstar;
  Vec2 tangent = Vec2::UnitX();
  PrincipalAxes axes;
  FeatureVector vector;
  scene::PointCloud cloud;  // target cloud of the largest mask component
};

/// Full feature extraction for the target of a scene frame.
inline ObjectFeatures extract_features(const scene::SceneFrame& frame, double tangent_radius_px = 7.0) {
  ObjectFeatures f;
  const BinaryMask target = largest_component(frame.mask);
  f.skeleton = Skeleton{set_pixels(thin(target))};
  f.pixel_centroid = pixel_centroid(target);
  f.cstar = characteristic_centroid(f.skeleton, f.pixel_centroid, frame.depth, frame.intrinsics);
  f.tangent = skeleton_tangent(f.skeleton, f.cstar.pixel, tangent_radius_px);
  f.cloud = scene::back_project(frame.depth, frame.intrinsics, target);
  f.axes = principal_axis(f.cloud.points);
  f.vector = feature_vector(f.cstar, f.tangent, f.axes);
  return f;
}

}  // namespace dexgrasp::features
