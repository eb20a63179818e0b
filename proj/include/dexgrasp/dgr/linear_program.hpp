// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

namespace dexgrasp::dgr {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  Eigen::VectorXd x;
};

/// Dense two-phase simplex for
///
///   maximize c'x  subject to  A x = b,  x >= 0.
///
/// Bland's rule is used for pivoting so the method terminates on degenerate
/// problems; sizes here are a few dozen columns, so the dense tableau is fine.
inline LpResult solve_standard_form(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                    const Eigen::VectorXd& c, double tol = 1e-12) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();

  // tableau columns: [x (n) | artificials (m) | rhs]
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    double sign = b[i] < 0 ? -1.0 : 1.0;
    t.row(i).head(n) = sign * a.row(i);
    t(i, n + i) = 1.0;
    t(i, n + m) = sign * b[i];
    basis[static_cast<std::size_t>(i)] = n + i;
  }

  auto pivot = [&](Eigen::Index row, Eigen::Index col) {
    t.row(row) /= t(row, col);
    for (Eigen::Index r = 0; r <= m; ++r) {
      if (r != row && t(r, col) != 0.0) t.row(r) -= t(r, col) * t.row(row);
    }
    basis[static_cast<std::size_t>(row)] = col;
  };

  // Runs simplex on objective row m, over the first `cols` columns.
  // Objective row holds reduced costs as (z_j - c_j); entering column has a
  // negative entry.
  auto run = [&](Eigen::Index cols) -> bool {
    for (int iter = 0; iter < 10000; ++iter) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (t(m, j) < -tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        if (t(i, enter) > tol) {
          double ratio = t(i, n + m) / t(i, enter);
          if (ratio < best - tol ||
              (std::abs(ratio - best) <= tol && leave >= 0 &&
               basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  };

  // phase 1: minimize sum of artificials == maximize -sum
  t.row(m).setZero();
  for (Eigen::Index i = 0; i < m; ++i) t.row(m) -= t.row(i);
  for (Eigen::Index i = 0; i < m; ++i) t(m, n + i) = 0.0;
  run(n + m);

  LpResult result;
  double infeasibility = -t(m, n + m);
  if (infeasibility > 1e-9) {
    result.status = LpStatus::Infeasible;
    return result;
  }

  // drive remaining artificials out of the basis where possible
  for (Eigen::Index i = 0; i < m; ++i) {
    if (basis[static_cast<std::size_t>(i)] >= n) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (std::abs(t(i, j)) > 1e-9) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  // phase 2
  t.row(m).setZero();
  for (Eigen::Index j = 0; j < n; ++j) t(m, j) = -c[j];
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::Index bcol = basis[static_cast<std::size_t>(i)];
    if (bcol < n && t(m, bcol) != 0.0) t.row(m) -= t(m, bcol) * t.row(i);
  }
  // artificial columns are excluded from entering
  if (!run(n)) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  result.status = LpStatus::Optimal;
  result.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::Index bcol = basis[static_cast<std::size_t>(i)];
    if (bcol < n) result.x[bcol] = t(i, n + m);
  }
  result.objective = c.dot(result.x);
  return result;
}

}  // namespace dexgrasp::dgr
