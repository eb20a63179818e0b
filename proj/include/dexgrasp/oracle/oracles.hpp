// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Brute-force reference checks for the grasp-analysis engine. Nothing in here
// calls into the LP or hull code; both oracles work directly on the wrench
// point set.

#include "dexgrasp/core/random.hpp"
#include "dexgrasp/dgr/wrench.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace dexgrasp::oracle {

using dgr::Contact;
using dgr::Wrench;

/// Minimum-norm point of conv(points) by Wolfe's algorithm. Exact up to
/// floating-point tolerances and finite.
template <int D>
Eigen::Matrix<double, D, 1> min_norm_point(std::span<const Eigen::Matrix<double, D, 1>> points) {
  using Point = Eigen::Matrix<double, D, 1>;
  const int n = static_cast<int>(points.size());
  const double z1 = 1e-13, z2 = 1e-12;
  double max_sq = 0.0;
  int start = 0;
  for (int i = 0; i < n; ++i) {
    double sq = points[static_cast<std::size_t>(i)].squaredNorm();
    max_sq = std::max(max_sq, sq);
    if (sq < points[static_cast<std::size_t>(start)].squaredNorm()) start = i;
  }
  std::vector<int> corral{start};
  std::vector<double> weights{1.0};
  Point x = points[static_cast<std::size_t>(start)];

  auto combine = [&](const std::vector<double>& w) {
    Point y = Point::Zero();
    for (std::size_t k = 0; k < corral.size(); ++k) y += w[k] * points[static_cast<std::size_t>(corral[k])];
    return y;
  };

  for (int major = 0; major < 1000; ++major) {
    int j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      double v = x.dot(points[static_cast<std::size_t>(i)]);
      if (v < best) {
        best = v;
        j = i;
      }
    }
    if (best > x.squaredNorm() - z1 * max_sq) break;
    if (std::find(corral.begin(), corral.end(), j) != corral.end()) break;
    corral.push_back(j);
    weights.push_back(0.0);

    for (int minor = 0; minor < 1000; ++minor) {
      // affine minimizer over the corral: [P'P 1; 1' 0][a; mu] = [0; 1]
      const auto k = static_cast<Eigen::Index>(corral.size());
      Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(k + 1, k + 1);
      for (Eigen::Index r = 0; r < k; ++r) {
        for (Eigen::Index c = 0; c < k; ++c)
          sys(r, c) = points[static_cast<std::size_t>(corral[static_cast<std::size_t>(r)])].dot(
              points[static_cast<std::size_t>(corral[static_cast<std::size_t>(c)])]);
        sys(r, k) = 1.0;
        sys(k, r) = 1.0;
      }
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
      rhs[k] = 1.0;
      Eigen::VectorXd sol = sys.completeOrthogonalDecomposition().solve(rhs);
      std::vector<double> alpha(static_cast<std::size_t>(k));
      for (Eigen::Index r = 0; r < k; ++r) alpha[static_cast<std::size_t>(r)] = sol[r];

      if (std::all_of(alpha.begin(), alpha.end(), [&](double a) { return a > z2; })) {
        weights = alpha;
        x = combine(weights);
        break;
      }
      double theta = 1.0;
      for (std::size_t r = 0; r < alpha.size(); ++r) {
        if (alpha[r] <= z2) {
          double denom = weights[r] - alpha[r];
          if (denom > 0.0) theta = std::min(theta, weights[r] / denom);
        }
      }
      for (std::size_t r = 0; r < alpha.size(); ++r) weights[r] = theta * alpha[r] + (1.0 - theta) * weights[r];
      std::vector<int> kept;
      std::vector<double> kept_w;
      for (std::size_t r = 0; r < weights.size(); ++r) {
        if (weights[r] > z2) {
          kept.push_back(corral[r]);
          kept_w.push_back(weights[r]);
        }
      }
      corral = kept;
      weights = kept_w;
      double total = 0.0;
      for (double w : weights) total += w;
      for (double& w : weights) w /= total;
      x = combine(weights);
    }
  }
  return x;
}

/// Ray-shooting interiority test: the origin is strictly inside conv(W) iff a
/// short step along every coordinate ray (+-probe * e_i) stays inside the hull.
/// Membership of each probe point is decided by the distance from the probe to
/// the hull (minimum-norm point of the shifted set).
inline bool ray_shooting_force_closure(std::span<const Wrench> wrenches, double probe = 1e-6,
                                       double member_tol = 1e-10) {
  if (wrenches.empty()) return false;
  std::vector<Wrench> shifted(wrenches.size());
  for (int axis = 0; axis < 6; ++axis) {
    for (double sign : {1.0, -1.0}) {
      Wrench p = Wrench::Zero();
      p[axis] = sign * probe;
      for (std::size_t i = 0; i < wrenches.size(); ++i) shifted[i] = wrenches[i] - p;
      if (min_norm_point<6>(std::span<const Wrench>(shifted)).norm() > member_tol) return false;
    }
  }
  return true;
}

/// Support function h(u) = max_i u . w_i.
inline double support(std::span<const Wrench> wrenches, const Wrench& u) {
  double h = -std::numeric_limits<double>::infinity();
  for (const auto& w : wrenches) h = std::max(h, u.dot(w));
  return h;
}

/// Minimizes max_i u . w_i over the unit sphere starting from u: projected
/// gradient descent with backtracking on the log-sum-exp smoothing
///   f(u) = max_i u.w_i + log(sum_i exp(beta (u.w_i - max))) / beta,
/// sharpening beta each round. Returns the best exact support value seen.
inline double refine_support_minimum(std::span<const Wrench> wrenches, Wrench u) {
  double scale = 0.0;
  for (const auto& w : wrenches) scale = std::max(scale, w.norm());
  double best = support(wrenches, u);
  if (best <= 0.0) return best;

  // the smoothing bias log(n)/beta starts at a few percent of h(u)
  const double beta0 = std::log(static_cast<double>(wrenches.size())) / (0.02 * best);
  for (double beta = beta0; beta < 2e8 / scale; beta *= 2.0) {
    auto smooth = [&](const Wrench& v, Wrench* grad) {
      double hmax = support(wrenches, v);
      double z = 0.0;
      Wrench g = Wrench::Zero();
      for (const auto& w : wrenches) {
        double e = std::exp(beta * (v.dot(w) - hmax));
        z += e;
        if (grad) g += e * w;
      }
      if (grad) *grad = g / z;
      return hmax + std::log(z) / beta;
    };
    double step = 0.1;
    for (int it = 0; it < 300 && step > 1e-14; ++it) {
      Wrench g;
      double f = smooth(u, &g);
      Wrench tangent = g - g.dot(u) * u;
      if (tangent.norm() < 1e-16) break;
      Wrench trial = (u - step * tangent).normalized();
      if (smooth(trial, nullptr) < f) {
        u = trial;
        best = std::min(best, support(wrenches, u));
        step *= 1.5;
      } else {
        step *= 0.5;
      }
    }
  }

  // snap to the hyperplane through the six wrenches most active at u
  std::vector<std::pair<double, int>> act;
  for (std::size_t i = 0; i < wrenches.size(); ++i) act.emplace_back(-u.dot(wrenches[i]), static_cast<int>(i));
  std::sort(act.begin(), act.end());
  std::vector<Wrench> plane{wrenches[static_cast<std::size_t>(act[0].second)]};
  for (std::size_t k = 1; k < act.size() && plane.size() < 6; ++k) {
    const Wrench& w = wrenches[static_cast<std::size_t>(act[k].second)];
    bool dup = std::any_of(plane.begin(), plane.end(), [&](const Wrench& p) { return (p - w).norm() < 1e-12 * scale; });
    if (!dup) plane.push_back(w);
  }
  if (plane.size() == 6) {
    Eigen::Matrix<double, 5, 6> m;
    for (int r = 0; r < 5; ++r) m.row(r) = (plane[static_cast<std::size_t>(r + 1)] - plane[0]).transpose();
    Eigen::JacobiSVD<Eigen::Matrix<double, 5, 6>> svd(m, Eigen::ComputeFullV);
    Wrench n = svd.matrixV().col(5);
    if (n.dot(u) < 0.0) n = -n;
    best = std::min(best, support(wrenches, n.normalized()));
  }
  return best;
}

/// Inscribed-ball radius estimated as min over unit directions u of the
/// support h(u): dense random direction sampling, then local refinement from
/// the best samples. Returns 0 when a non-positive support is found. The
/// estimate approaches the true value from above.
inline double direction_sampling_quality(std::span<const Wrench> wrenches, std::uint64_t seed,
                                         int samples = 20000, int starts = 16) {
  if (wrenches.empty()) return 0.0;
  Rng rng(seed);
  std::vector<std::pair<double, Wrench>> best;
  best.reserve(static_cast<std::size_t>(samples) + 12);
  // half the directions are isotropic, half are biased toward the thin
  // directions of the point set (u ~ C^-1 z for the second-moment matrix C)
  Eigen::Matrix<double, 6, 6> c = Eigen::Matrix<double, 6, 6>::Zero();
  for (const auto& w : wrenches) c += w * w.transpose();
  c /= static_cast<double>(wrenches.size());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> eig(c);
  const Wrench ev = eig.eigenvalues().cwiseMax(1e-12 * eig.eigenvalues().maxCoeff());
  const Eigen::Matrix<double, 6, 6> thin =
      eig.eigenvectors() * ev.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  for (int s = 0; s < samples; ++s) {
    Wrench u;
    for (int i = 0; i < 6; ++i) u[i] = rng.normal();
    if (s % 2 == 1) u = thin * u;
    u.normalize();
    best.emplace_back(support(wrenches, u), u);
  }
  for (int i = 0; i < 6; ++i)
    for (double sign : {1.0, -1.0}) {
      Wrench u = Wrench::Zero();
      u[i] = sign;
      best.emplace_back(support(wrenches, u), u);
    }
  std::sort(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  // refine from the lowest samples, skipping ones close to an earlier start so
  // that distinct local minima get explored
  double q = best.front().first;
  std::vector<Wrench> used;
  for (const auto& [h, u] : best) {
    if (static_cast<int>(used.size()) >= starts || q <= 0.0) break;
    bool near = std::any_of(used.begin(), used.end(), [&](const Wrench& v) { return u.dot(v) > std::cos(0.25); });
    if (near) continue;
    used.push_back(u);
    q = std::min(q, refine_support_minimum(wrenches, u));
  }
  return std::max(q, 0.0);
}

/// Random contact fixture on the unit sphere: points uniform on the sphere,
/// inward normals, friction uniform in [mu_lo, mu_hi].
inline std::vector<Contact> random_sphere_contacts(Rng& rng, int count, double mu_lo, double mu_hi) {
  std::vector<Contact> cs;
  for (int i = 0; i < count; ++i) {
    Vec3 p(rng.normal(), rng.normal(), rng.normal());
    p.normalize();
    cs.push_back(Contact{p, -p, rng.uniform(mu_lo, mu_hi)});
  }
  return cs;
}

/// Contacts at the vertices of a regular tetrahedron inscribed in the unit
/// sphere, inward normals.
inline std::vector<Contact> tetrahedron_contacts(double mu) {
  const double s = 1.0 / std::sqrt(3.0);
  std::vector<Contact> cs;
  for (const Vec3& p : {Vec3(s, s, s), Vec3(s, -s, -s), Vec3(-s, s, -s), Vec3(-s, -s, s)})
    cs.push_back(Contact{p, -p, mu});
  return cs;
}

inline std::vector<Contact> antipodal_contacts(double mu) {
  return {Contact{Vec3(1, 0, 0), Vec3(-1, 0, 0), mu}, Contact{Vec3(-1, 0, 0), Vec3(1, 0, 0), mu}};
}

}  // namespace dexgrasp::oracle
