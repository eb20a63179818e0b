// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/core/kdtree.hpp"
#include "dexgrasp/scene/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>
#include <vector>

namespace dexgrasp::scene {

struct NormalEstimate {
  PointCloud cloud;                    // input cloud with normals filled in
  std::vector<int> degenerate;         // indices whose two smallest eigenvalues tie
};

/// Two eigenvalues are considered equal when they differ by at most this
/// fraction of the largest eigenvalue of the neighborhood covariance.
inline constexpr double kEigenTieTolerance = 1e-9;

/// Smallest-eigenvalue eigenvector of each point's k-NN covariance (the point
/// itself included), flipped so dot(n, -p) >= 0. When the smallest two
/// eigenvalues tie the normal is still emitted: the lexicographically larger
/// of the two candidate eigenvectors (after orientation) is used, and the
/// point is listed as degenerate.
inline NormalEstimate estimate_normals(const PointCloud& in, int k) {
  if (k < 3) throw ValidationError("normal estimation needs k >= 3");
  if (in.size() < static_cast<std::size_t>(k)) throw TooFewPoints("need at least k points, have " + std::to_string(in.size()));
  NormalEstimate out{in, {}};
  out.cloud.normals.assign(in.size(), Vec3::Zero());
  KdTree tree(in.points);
  const int kk = std::min<int>(k + 1, static_cast<int>(in.size()));

  auto orient = [](Vec3 n, const Vec3& p) {
    if (n.dot(-p) < 0.0) n = -n;
    return n.normalized();
  };

  for (std::size_t i = 0; i < in.size(); ++i) {
    const Vec3& p = in.points[i];
    const auto nb = tree.knn(p, kk);
    Vec3 mean = Vec3::Zero();
    for (int j : nb) mean += tree.point(j);
    mean /= static_cast<double>(nb.size());
    Mat3 cov = Mat3::Zero();
    for (int j : nb) {
      const Vec3 d = tree.point(j) - mean;
      cov += d * d.transpose();
    }
    cov /= static_cast<double>(nb.size());
    Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
    const Vec3 ev = eig.eigenvalues();  // ascending
    Vec3 n = orient(eig.eigenvectors().col(0), p);
    const double scale = std::max(ev[2], 1e-300);
    if (ev[1] - ev[0] <= kEigenTieTolerance * scale) {
      const Vec3 alt = orient(eig.eigenvectors().col(1), p);
      if (std::lexicographical_compare(n.data(), n.data() + 3, alt.data(), alt.data() + 3)) n = alt;
      out.degenerate.push_back(static_cast<int>(i));
    }
    out.cloud.normals[i] = n;
  }
  return out;
}

}  // namespace dexgrasp::scene
