// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace dexgrasp::dgr {

/// Point contact with Coulomb friction. `normal` points into the object.
struct Contact {
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
  double mu = 0.5;
};

/// 6-D wrench: force on top, torque (divided by the torque scale) below.
using Wrench = Vec6;

inline Vec3 wrench_force(const Wrench& w) { return w.head<3>(); }
inline Vec3 wrench_torque(const Wrench& w) { return w.tail<3>(); }

/// Largest distance from `centroid` to any contact point. Used as the torque
/// scale so that unit cone edges map to wrenches of norm at most sqrt(2).
inline double torque_scale(std::span<const Contact> contacts, const Vec3& centroid) {
  double rho = 0.0;
  for (const auto& c : contacts) rho = std::max(rho, (c.point - centroid).norm());
  return rho > 0.0 ? rho : 1.0;
}

/// Unit friction-cone edge directions of one contact:
///   f_k = normalize(n + mu (cos(th_k) t1 + sin(th_k) t2)),  th_k = 2 pi k / m.
/// t1 follows the moment arm (point - centroid) projected on the tangent
/// plane; when the arm is parallel to the normal the axis rule applies.
inline std::vector<Vec3> cone_edges(const Contact& c, const Vec3& centroid, int edge_count) {
  const auto [t1, t2] = tangent_basis(c.normal, c.point - centroid);
  std::vector<Vec3> edges;
  edges.reserve(static_cast<std::size_t>(edge_count));
  for (int k = 0; k < edge_count; ++k) {
    double th = 2.0 * kPi * k / edge_count;
    edges.push_back((c.normal + c.mu * (std::cos(th) * t1 + std::sin(th) * t2)).normalized());
  }
  return edges;
}

/// Cone-edge wrenches of one contact about `centroid`, torque divided by rho.
inline std::vector<Wrench> contact_wrenches(const Contact& c, const Vec3& centroid, int edge_count,
                                            double rho) {
  std::vector<Wrench> out;
  out.reserve(static_cast<std::size_t>(edge_count));
  const Vec3 r = c.point - centroid;
  for (const Vec3& f : cone_edges(c, centroid, edge_count)) {
    Wrench w;
    w << f, r.cross(f) / rho;
    out.push_back(w);
  }
  return out;
}

/// Union of every contact's edge wrenches, with rho = torque_scale().
inline std::vector<Wrench> grasp_wrenches(std::span<const Contact> contacts, const Vec3& centroid,
                                          int edge_count) {
  const double rho = torque_scale(contacts, centroid);
  std::vector<Wrench> all;
  for (const auto& c : contacts) {
    auto w = contact_wrenches(c, centroid, edge_count, rho);
    all.insert(all.end(), w.begin(), w.end());
  }
  return all;
}

inline std::vector<Wrench> grasp_wrenches(std::span<const Contact> contacts, const Vec3& centroid,
                                          int edge_count, double rho) {
  std::vector<Wrench> all;
  for (const auto& c : contacts) {
    auto w = contact_wrenches(c, centroid, edge_count, rho);
    all.insert(all.end(), w.begin(), w.end());
  }
  return all;
}

/// Affine dimension of a point set: number of singular values of the
/// centered point matrix above tol * max(1, largest singular value).
template <int D>
int affine_dimension(std::span<const Eigen::Matrix<double, D, 1>> pts, double tol = 1e-9) {
  if (pts.size() <= 1) return 0;
  Eigen::Matrix<double, D, 1> mean = Eigen::Matrix<double, D, 1>::Zero();
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  Eigen::MatrixXd centered(static_cast<Eigen::Index>(pts.size()), D);
  for (std::size_t i = 0; i < pts.size(); ++i)
    centered.row(static_cast<Eigen::Index>(i)) = (pts[i] - mean).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
  const auto& sv = svd.singularValues();
  double top = sv.size() > 0 ? sv[0] : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > tol * std::max(1.0, top)) ++rank;
  return rank;
}

/// Rank of the linear span of a point set (same threshold rule).
template <int D>
int linear_rank(std::span<const Eigen::Matrix<double, D, 1>> pts, double tol = 1e-9) {
  if (pts.empty()) return 0;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(pts.size()), D);
  for (std::size_t i = 0; i < pts.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  double top = sv.size() > 0 ? sv[0] : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > tol * std::max(1.0, top)) ++rank;
  return rank;
}

}  // namespace dexgrasp::dgr
