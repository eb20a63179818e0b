// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/dgr/linear_program.hpp"
#include "dexgrasp/dgr/wrench.hpp"

#include <span>
#include <vector>

namespace dexgrasp::dgr {

/// Minimum weight below which a convex combination is not counted as strictly
/// positive.
inline constexpr double kStrictWeightTol = 1e-12;

/// True iff the origin lies strictly inside conv(wrenches).
///
/// Decided as a linear feasibility problem: the origin is in the relative
/// interior iff it admits a convex combination with every weight strictly
/// positive, i.e. the LP
///
///   maximize t  s.t.  sum_i lambda_i w_i = 0,  sum_i lambda_i = 1,  lambda_i >= t
///
/// has t* > 0. Relative interior becomes interior when the wrenches span R^6.
inline bool origin_strictly_inside(std::span<const Wrench> wrenches) {
  if (wrenches.size() < 7) return false;
  if (linear_rank<6>(wrenches) < 6) return false;

  // substitute lambda_i = s_i + t with s_i, t >= 0
  const auto n = static_cast<Eigen::Index>(wrenches.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(7, n + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(7);
  Wrench sum = Wrench::Zero();
  for (Eigen::Index i = 0; i < n; ++i) {
    a.block<6, 1>(0, i) = wrenches[static_cast<std::size_t>(i)];
    a(6, i) = 1.0;
    sum += wrenches[static_cast<std::size_t>(i)];
  }
  a.block<6, 1>(0, n) = sum;
  a(6, n) = static_cast<double>(n);
  b[6] = 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
  c[n] = 1.0;

  LpResult lp = solve_standard_form(a, b, c);
  return lp.status == LpStatus::Optimal && lp.objective > kStrictWeightTol;
}

/// Force closure of a contact set under the discretized friction cones.
inline bool force_closure(std::span<const Contact> contacts, const Vec3& centroid, int edge_count,
                          double rho) {
  if (contacts.empty()) return false;
  auto w = grasp_wrenches(contacts, centroid, edge_count, rho);
  return origin_strictly_inside(w);
}

inline bool force_closure(std::span<const Contact> contacts, const Vec3& centroid,
                          int edge_count = 8) {
  return force_closure(contacts, centroid, edge_count, torque_scale(contacts, centroid));
}

}  // namespace dexgrasp::dgr
