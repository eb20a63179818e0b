// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/geometry.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <queue>
#include <span>
#include <utility>
#include <vector>

namespace dexgrasp {

/// Static 3-D k-d tree over a borrowed point array. Ties in distance are
/// broken by point index so query results are deterministic.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(std::span<const Vec3> points) : pts_(points.begin(), points.end()) {
    idx_.resize(pts_.size());
    std::iota(idx_.begin(), idx_.end(), 0);
    nodes_.reserve(pts_.size());
    if (!pts_.empty()) root_ = build(0, static_cast<int>(idx_.size()), 0);
  }

  std::size_t size() const { return pts_.size(); }
  const Vec3& point(int i) const { return pts_[static_cast<std::size_t>(i)]; }

  /// Indices of the k nearest points, nearest first.
  std::vector<int> knn(const Vec3& q, int k) const {
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry> heap;  // max-heap on (distance, index)
    if (k > 0 && root_ >= 0) search_knn(root_, q, static_cast<std::size_t>(k), heap);
    std::vector<int> out(heap.size());
    for (std::size_t i = out.size(); i-- > 0;) {
      out[i] = heap.top().second;
      heap.pop();
    }
    return out;
  }

  /// Distance to the nearest point (infinity for an empty tree).
  double nearest_distance(const Vec3& q) const {
    auto nn = knn(q, 1);
    return nn.empty() ? std::numeric_limits<double>::infinity() : (point(nn[0]) - q).norm();
  }

 private:
  struct Node {
    int point;
    int axis;
    int left = -1, right = -1;
  };

  std::vector<Vec3> pts_;
  std::vector<int> idx_;
  std::vector<Node> nodes_;
  int root_ = -1;

  int build(int lo, int hi, int depth) {
    if (lo >= hi) return -1;
    // split on the widest axis of this cell
    Vec3 mn = pts_[static_cast<std::size_t>(idx_[static_cast<std::size_t>(lo)])], mx = mn;
    for (int i = lo; i < hi; ++i) {
      mn = mn.cwiseMin(pts_[static_cast<std::size_t>(idx_[static_cast<std::size_t>(i)])]);
      mx = mx.cwiseMax(pts_[static_cast<std::size_t>(idx_[static_cast<std::size_t>(i)])]);
    }
    int axis = 0;
    (mx - mn).maxCoeff(&axis);
    (void)depth;
    const int mid = (lo + hi) / 2;
    std::nth_element(idx_.begin() + lo, idx_.begin() + mid, idx_.begin() + hi, [&](int a, int b) {
      const double va = pts_[static_cast<std::size_t>(a)][axis], vb = pts_[static_cast<std::size_t>(b)][axis];
      return va < vb || (va == vb && a < b);
    });
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{idx_[static_cast<std::size_t>(mid)], axis});
    const int l = build(lo, mid, depth + 1);
    const int r = build(mid + 1, hi, depth + 1);
    nodes_[static_cast<std::size_t>(id)].left = l;
    nodes_[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  void search_knn(int n, const Vec3& q, std::size_t k, std::priority_queue<std::pair<double, int>>& heap) const {
    const Node& node = nodes_[static_cast<std::size_t>(n)];
    const Vec3& p = pts_[static_cast<std::size_t>(node.point)];
    const double d2 = (p - q).squaredNorm();
    if (heap.size() < k) {
      heap.emplace(d2, node.point);
    } else if (std::make_pair(d2, node.point) < heap.top()) {
      heap.pop();
      heap.emplace(d2, node.point);
    }
    const double diff = q[node.axis] - p[node.axis];
    const int near = diff <= 0.0 ? node.left : node.right;
    const int far = diff <= 0.0 ? node.right : node.left;
    if (near >= 0) search_knn(near, q, k, heap);
    if (far >= 0 && (heap.size() < k || diff * diff <= heap.top().first)) search_knn(far, q, k, heap);
  }
};

}  // namespace dexgrasp
