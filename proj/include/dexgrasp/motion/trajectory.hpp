// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/core/kdtree.hpp"
#include "dexgrasp/core/random.hpp"
#include "dexgrasp/motion/arm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace dexgrasp::motion {

struct Trajectory {
  std::vector<ArmJoints> waypoints;
  double dt = 0.1;  // nominal step (s)
};

/// Per-joint linear interpolation; endpoints are copied exactly.
inline Trajectory plan_linear(const ArmJoints& start, const ArmJoints& goal, int n, double dt = 0.1) {
  if (n < 2) throw ValidationError("trajectory needs at least 2 waypoints");
  Trajectory t;
  t.dt = dt;
  t.waypoints.resize(static_cast<std::size_t>(n));
  t.waypoints.front() = start;
  t.waypoints.back() = goal;
  for (int k = 1; k < n - 1; ++k) {
    const double s = static_cast<double>(k) / (n - 1);
    t.waypoints[static_cast<std::size_t>(k)] = start + s * (goal - start);
  }
  return t;
}

/// sqrt of the summed squared joint steps between consecutive waypoints.
inline double motion_cost(const Trajectory& t) {
  if (t.waypoints.size() < 2) throw ValidationError("trajectory needs at least 2 waypoints");
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < t.waypoints.size(); ++k) s += (t.waypoints[k + 1] - t.waypoints[k]).squaredNorm();
  return std::sqrt(s);
}

struct StompParams {
  int iterations = 50;
  int rollouts = 8;
  double noise = 0.05;         // rad, largest per-waypoint noise standard deviation
  double clearance = 0.02;     // m, proxy sphere surface to obstacle
  double proxy_radius = 0.04;  // m
  double obstacle_weight = 1000.0;
  double sensitivity = 10.0;   // softmax temperature on normalized rollout costs
  std::uint64_t seed = 1;
};

/// Sphere centers standing in for the arm: every frame origin from the
/// shoulder to the flange plus the midpoint of each link between them.
inline std::vector<Vec3> proxy_centers(const ArmModel& m, const ArmJoints& j) {
  const auto f = arm_frames(m, j);
  std::vector<Vec3> c;
  for (std::size_t i = 1; i < f.size(); ++i) {
    c.push_back(f[i].translation());
    c.push_back(0.5 * (f[i].translation() + f[i - 1].translation()));
  }
  return c;
}

/// Smallest proxy-surface-to-obstacle distance over a configuration.
inline double clearance(const ArmModel& m, const ArmJoints& j, const KdTree* obstacles, double proxy_radius) {
  if (obstacles == nullptr || obstacles->size() == 0) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : proxy_centers(m, j)) best = std::min(best, obstacles->nearest_distance(c) - proxy_radius);
  return best;
}

inline double min_clearance(const ArmModel& m, const Trajectory& t, const KdTree* obstacles, double proxy_radius) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& w : t.waypoints) best = std::min(best, clearance(m, w, obstacles, proxy_radius));
  return best;
}

namespace detail {

inline double obstacle_cost(const ArmModel& m, const ArmJoints& j, const KdTree* obstacles, const StompParams& p) {
  if (obstacles == nullptr || obstacles->size() == 0) return 0.0;
  double c = 0.0;
  for (const auto& x : proxy_centers(m, j)) {
    const double gap = p.clearance - (obstacles->nearest_distance(x) - p.proxy_radius);
    if (gap > 0.0) c += gap * gap;
  }
  return p.obstacle_weight * c;
}

/// Cost of each waypoint: squared second difference (interior only) plus the
/// obstacle penalty.
inline std::vector<double> waypoint_costs(const ArmModel& m, const std::vector<ArmJoints>& w, const KdTree* obstacles,
                                          const StompParams& p) {
  std::vector<double> c(w.size(), 0.0);
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k > 0 && k + 1 < w.size()) c[k] = (w[k - 1] - 2.0 * w[k] + w[k + 1]).squaredNorm();
    c[k] += obstacle_cost(m, w[k], obstacles, p);
  }
  return c;
}

inline double total(const std::vector<double>& c) {
  double s = 0.0;
  for (double v : c) s += v;
  return s;
}

}  // namespace detail

/// Total refinement objective of a trajectory (smoothness plus obstacles).
inline double stomp_cost(const ArmModel& m, const Trajectory& t, const KdTree* obstacles, const StompParams& p) {
  return detail::total(detail::waypoint_costs(m, t.waypoints, obstacles, p));
}

/// Stochastic refinement with fixed endpoints. Each iteration draws smooth
/// noise (covariance = inverse of the finite-difference acceleration metric),
/// weights the rollouts per waypoint by a softmax of their negative costs,
/// smooths the weighted update and keeps it only if the total cost drops.
/// The best single rollout competes with the update.
inline Trajectory stomp_refine(const ArmModel& m, const Trajectory& in, const KdTree* obstacles,
                               const StompParams& p = {}) {
  const int n = static_cast<int>(in.waypoints.size());
  if (n < 2) throw ValidationError("trajectory needs at least 2 waypoints");
  if (p.iterations <= 0 || n < 3) return in;
  if (p.rollouts < 1 || p.noise < 0.0) throw ValidationError("stomp: rollouts >= 1 and noise >= 0 required");
  const int inner = n - 2;

  // acceleration metric over the interior waypoints
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(inner + 2, inner);
  for (int k = 0; k < inner + 2; ++k)
    for (int d = -1; d <= 1; ++d) {
      const int col = k - 1 + d;  // interior index of waypoint k + d
      if (col >= 0 && col < inner) a(k, col) = d == 0 ? -2.0 : 1.0;
    }
  const Eigen::MatrixXd r_inv = (a.transpose() * a).inverse();
  const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(r_inv).matrixL();
  const double noise_scale = p.noise / std::sqrt(r_inv.diagonal().maxCoeff());
  Eigen::MatrixXd smooth = r_inv;
  for (int c = 0; c < inner; ++c) smooth.col(c) *= 1.0 / (inner * smooth.col(c).cwiseAbs().maxCoeff());

  Trajectory cur = in;
  std::vector<double> cur_costs = detail::waypoint_costs(m, cur.waypoints, obstacles, p);
  double cur_total = detail::total(cur_costs);
  Rng rng(p.seed);
  const auto k_count = static_cast<std::size_t>(p.rollouts);

  for (int it = 0; it < p.iterations; ++it) {
    std::vector<Eigen::MatrixXd> eps(k_count);  // inner x 6
    std::vector<std::vector<double>> costs(k_count);
    std::vector<std::vector<ArmJoints>> rolls(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
      Eigen::MatrixXd z(inner, 6);
      for (int i = 0; i < inner; ++i)
        for (int j = 0; j < 6; ++j) z(i, j) = rng.normal();
      eps[k] = noise_scale * chol * z;
      rolls[k] = cur.waypoints;
      for (int i = 0; i < inner; ++i) {
        auto& w = rolls[k][static_cast<std::size_t>(i) + 1];
        w = m.clamp(w + eps[k].row(i).transpose());
        eps[k].row(i) = (w - cur.waypoints[static_cast<std::size_t>(i) + 1]).transpose();
      }
      costs[k] = detail::waypoint_costs(m, rolls[k], obstacles, p);
    }

    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(inner, 6);
    for (int i = 0; i < inner; ++i) {
      const auto w = static_cast<std::size_t>(i) + 1;
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (std::size_t k = 0; k < k_count; ++k) {
        lo = std::min(lo, costs[k][w]);
        hi = std::max(hi, costs[k][w]);
      }
      std::vector<double> prob(k_count, 1.0);
      if (hi - lo > 1e-300)
        for (std::size_t k = 0; k < k_count; ++k) prob[k] = std::exp(-p.sensitivity * (costs[k][w] - lo) / (hi - lo));
      const double z = detail::total(prob);
      for (std::size_t k = 0; k < k_count; ++k) delta.row(i) += (prob[k] / z) * eps[k].row(i);
    }
    delta = smooth * delta;

    std::vector<ArmJoints> next = cur.waypoints;
    for (int i = 0; i < inner; ++i) {
      auto& w = next[static_cast<std::size_t>(i) + 1];
      w = m.clamp(w + delta.row(i).transpose());
    }
    auto next_costs = detail::waypoint_costs(m, next, obstacles, p);
    double next_total = detail::total(next_costs);
    for (std::size_t k = 0; k < k_count; ++k) {
      const double t = detail::total(costs[k]);
      if (t < next_total) {
        next = rolls[k];
        next_costs = costs[k];
        next_total = t;
      }
    }
    if (next_total < cur_total) {
      cur.waypoints = std::move(next);
      cur_costs = std::move(next_costs);
      cur_total = next_total;
    }
  }
  return cur;
}

}  // namespace dexgrasp::motion
