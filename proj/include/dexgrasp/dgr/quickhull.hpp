// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/core/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

namespace dexgrasp::dgr {

/// Convex hull of a full-dimensional point set in R^D (quickhull).
///
/// Facets are simplicial. Input points are joggled by a tiny deterministic
/// perturbation before the hull is built so that coplanar subsets (friction
/// cone edges of one contact lie in a common 2-flat) do not create ties. Each
/// reported facet normal is refit through the original vertices when they are
/// in general position, and its offset is re-taken as the support value of the
/// original points, so every input point satisfies every facet inequality.
template <int D>
class QuickHull {
 public:
  using Point = Eigen::Matrix<double, D, 1>;

  struct Facet {
    std::array<int, D> vertices{};
    Point normal = Point::Zero();  // outward unit normal
    double offset = 0.0;           // plane: normal . x == offset
  };

  /// Relative joggle magnitude (fraction of the point-set extent).
  static constexpr double kJoggle = 1e-8;

  explicit QuickHull(std::span<const Point> points, std::uint64_t joggle_seed = 0x5eed) {
    build(points, joggle_seed);
  }

  const std::vector<Facet>& facets() const { return result_; }

  /// Signed distance of x to facet f (positive outside).
  static double distance(const Facet& f, const Point& x) { return f.normal.dot(x) - f.offset; }

 private:
  struct Node {
    std::array<int, D> vertices{};
    std::array<int, D> neighbors{};  // neighbors[i] shares the ridge opposite vertices[i]
    Point normal = Point::Zero();
    double offset = 0.0;
    std::vector<int> outside;
    bool alive = true;
    int visit = -1;
  };

  std::vector<Point> pts_;
  std::vector<Node> nodes_;
  std::vector<Facet> result_;
  Point interior_ = Point::Zero();
  double eps_ = 0.0;

  double dist(const Node& f, int p) const { return f.normal.dot(pts_[static_cast<std::size_t>(p)]) - f.offset; }

  void set_plane(Node& f) const {
    Eigen::Matrix<double, D - 1, D> m;
    const Point& p0 = pts_[static_cast<std::size_t>(f.vertices[0])];
    for (int i = 1; i < D; ++i) m.row(i - 1) = (pts_[static_cast<std::size_t>(f.vertices[i])] - p0).transpose();
    Eigen::JacobiSVD<Eigen::Matrix<double, D - 1, D>> svd(m, Eigen::ComputeFullV);
    Point n = svd.matrixV().col(D - 1);
    n.normalize();
    double off = n.dot(p0);
    if (n.dot(interior_) - off > 0.0) {
      n = -n;
      off = -off;
    }
    f.normal = n;
    f.offset = off;
  }

  std::vector<int> initial_simplex() const {
    const int n = static_cast<int>(pts_.size());
    std::vector<int> chosen;
    // start with the two points farthest apart along the widest coordinate
    int lo = 0, hi = 0, axis = 0;
    double best_span = -1.0;
    for (int d = 0; d < D; ++d) {
      int a = 0, b = 0;
      for (int i = 1; i < n; ++i) {
        if (pts_[static_cast<std::size_t>(i)][d] < pts_[static_cast<std::size_t>(a)][d]) a = i;
        if (pts_[static_cast<std::size_t>(i)][d] > pts_[static_cast<std::size_t>(b)][d]) b = i;
      }
      double span = pts_[static_cast<std::size_t>(b)][d] - pts_[static_cast<std::size_t>(a)][d];
      if (span > best_span) {
        best_span = span;
        lo = a;
        hi = b;
        axis = d;
      }
    }
    (void)axis;
    chosen.push_back(lo);
    chosen.push_back(hi);
    // greedily add the point farthest from the affine span of the chosen ones
    while (static_cast<int>(chosen.size()) < D + 1) {
      const Point& p0 = pts_[static_cast<std::size_t>(chosen[0])];
      Eigen::MatrixXd basis(D, static_cast<Eigen::Index>(chosen.size()) - 1);
      for (std::size_t k = 1; k < chosen.size(); ++k)
        basis.col(static_cast<Eigen::Index>(k) - 1) = pts_[static_cast<std::size_t>(chosen[k])] - p0;
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
      Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(D, basis.cols());
      int best = -1;
      double best_d = -1.0;
      for (int i = 0; i < n; ++i) {
        Point v = pts_[static_cast<std::size_t>(i)] - p0;
        double d = (v - q * (q.transpose() * v)).norm();
        if (d > best_d) {
          best_d = d;
          best = i;
        }
      }
      if (best_d <= 0.0) throw DegenerateHull(static_cast<int>(chosen.size()) - 1);
      chosen.push_back(best);
    }
    return chosen;
  }

  void build(std::span<const Point> input, std::uint64_t seed) {
    if (input.size() < static_cast<std::size_t>(D + 1)) throw DegenerateHull(static_cast<int>(input.size()) - 1);
    Point lo = input[0], hi = input[0];
    for (const auto& p : input) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const double extent = std::max((hi - lo).maxCoeff(), 1e-300);
    Rng rng(seed);
    pts_.reserve(input.size());
    for (const auto& p : input) {
      Point q = p;
      for (int d = 0; d < D; ++d) q[d] += kJoggle * extent * rng.uniform(-1.0, 1.0);
      pts_.push_back(q);
    }
    eps_ = 1e-13 * extent;

    const std::vector<int> simplex = initial_simplex();
    interior_.setZero();
    for (int v : simplex) interior_ += pts_[static_cast<std::size_t>(v)];
    interior_ /= static_cast<double>(D + 1);

    // facet j omits simplex vertex j
    for (int j = 0; j <= D; ++j) {
      Node f;
      int k = 0;
      for (int i = 0; i <= D; ++i) {
        if (i == j) continue;
        f.vertices[static_cast<std::size_t>(k)] = simplex[static_cast<std::size_t>(i)];
        // the ridge opposite this vertex is shared with the facet omitting it
        f.neighbors[static_cast<std::size_t>(k)] = i;
        ++k;
      }
      set_plane(f);
      nodes_.push_back(std::move(f));
    }

    std::vector<char> in_simplex(pts_.size(), 0);
    for (int v : simplex) in_simplex[static_cast<std::size_t>(v)] = 1;
    for (int p = 0; p < static_cast<int>(pts_.size()); ++p) {
      if (in_simplex[static_cast<std::size_t>(p)]) continue;
      assign_outside(p, nodes_, 0, static_cast<int>(nodes_.size()));
    }

    int visit_stamp = 0;
    for (;;) {
      int current = -1;
      for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
        if (nodes_[static_cast<std::size_t>(i)].alive && !nodes_[static_cast<std::size_t>(i)].outside.empty()) {
          current = i;
          break;
        }
      }
      if (current < 0) break;

      // farthest outside point of the chosen facet
      const Node& cf = nodes_[static_cast<std::size_t>(current)];
      int eye = cf.outside.front();
      double far = dist(cf, eye);
      for (int p : cf.outside) {
        double d = dist(cf, p);
        if (d > far) {
          far = d;
          eye = p;
        }
      }

      // visible set by flood fill
      ++visit_stamp;
      std::vector<int> visible{current};
      nodes_[static_cast<std::size_t>(current)].visit = visit_stamp;
      for (std::size_t q = 0; q < visible.size(); ++q) {
        const Node& f = nodes_[static_cast<std::size_t>(visible[q])];
        for (int nb : f.neighbors) {
          Node& g = nodes_[static_cast<std::size_t>(nb)];
          if (g.visit == visit_stamp) continue;
          if (dist(g, eye) > eps_) {
            g.visit = visit_stamp;
            visible.push_back(nb);
          }
        }
      }

      // horizon ridges -> new facets
      std::vector<int> created;
      std::map<std::array<int, D - 1>, std::pair<int, int>> open_ridges;
      for (int vi : visible) {
        for (int k = 0; k < D; ++k) {
          const int nb = nodes_[static_cast<std::size_t>(vi)].neighbors[static_cast<std::size_t>(k)];
          if (nodes_[static_cast<std::size_t>(nb)].visit == visit_stamp) continue;
          Node nf;
          nf.vertices = nodes_[static_cast<std::size_t>(vi)].vertices;
          nf.vertices[static_cast<std::size_t>(k)] = eye;
          nf.neighbors.fill(-1);
          nf.neighbors[static_cast<std::size_t>(k)] = nb;
          set_plane(nf);
          const int id = static_cast<int>(nodes_.size());
          // repoint the horizon neighbor
          Node& h = nodes_[static_cast<std::size_t>(nb)];
          for (auto& back : h.neighbors)
            if (back == vi) back = id;
          nodes_.push_back(std::move(nf));
          created.push_back(id);
          // ridges of the new facet that contain the eye
          for (int r = 0; r < D; ++r) {
            if (r == k) continue;
            std::array<int, D - 1> key{};
            int w = 0;
            for (int s = 0; s < D; ++s)
              if (s != r) key[static_cast<std::size_t>(w++)] = nodes_[static_cast<std::size_t>(id)].vertices[static_cast<std::size_t>(s)];
            std::sort(key.begin(), key.end());
            auto it = open_ridges.find(key);
            if (it == open_ridges.end()) {
              open_ridges.emplace(key, std::make_pair(id, r));
            } else {
              auto [other, other_r] = it->second;
              nodes_[static_cast<std::size_t>(id)].neighbors[static_cast<std::size_t>(r)] = other;
              nodes_[static_cast<std::size_t>(other)].neighbors[static_cast<std::size_t>(other_r)] = id;
              open_ridges.erase(it);
            }
          }
        }
      }

      // redistribute outside points of the removed facets
      std::vector<int> orphans;
      for (int vi : visible) {
        Node& f = nodes_[static_cast<std::size_t>(vi)];
        f.alive = false;
        for (int p : f.outside)
          if (p != eye) orphans.push_back(p);
        f.outside.clear();
        f.outside.shrink_to_fit();
      }
      for (int p : orphans) assign_outside(p, created);
    }

    for (const Node& f : nodes_) {
      if (!f.alive) continue;
      const Point n = refit_normal(f, input);
      double support = -std::numeric_limits<double>::infinity();
      for (const auto& p : input) support = std::max(support, n.dot(p));
      result_.push_back(Facet{f.vertices, n, support});
    }
  }

  /// Plane normal through the unjoggled facet vertices when they are in
  /// general position; otherwise the joggled normal.
  Point refit_normal(const Node& f, std::span<const Point> input) const {
    Eigen::Matrix<double, D - 1, D> m;
    const Point& p0 = input[static_cast<std::size_t>(f.vertices[0])];
    for (int i = 1; i < D; ++i) m.row(i - 1) = (input[static_cast<std::size_t>(f.vertices[i])] - p0).transpose();
    Eigen::JacobiSVD<Eigen::Matrix<double, D - 1, D>> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (!(sv[D - 2] > 1e-6 * sv[0])) return f.normal;
    Point n = svd.matrixV().col(D - 1).normalized();
    if (n.dot(f.normal) < 0.0) n = -n;
    // a refit that tilts far from the joggled plane means the vertices were
    // nearly degenerate after all
    return n.dot(f.normal) > 1.0 - 1e-6 ? n : f.normal;
  }

  void assign_outside(int p, std::vector<Node>& nodes, int begin, int end) {
    for (int i = begin; i < end; ++i) {
      if (dist(nodes[static_cast<std::size_t>(i)], p) > eps_) {
        nodes[static_cast<std::size_t>(i)].outside.push_back(p);
        return;
      }
    }
  }

  void assign_outside(int p, const std::vector<int>& candidates) {
    for (int i : candidates) {
      if (dist(nodes_[static_cast<std::size_t>(i)], p) > eps_) {
        nodes_[static_cast<std::size_t>(i)].outside.push_back(p);
        return;
      }
    }
  }
};

}  // namespace dexgrasp::dgr
