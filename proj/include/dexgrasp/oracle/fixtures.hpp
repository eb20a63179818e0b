// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Synthetic geometry used by tests and the acceptance runner.

#include "dexgrasp/core/geometry.hpp"
#include "dexgrasp/scene/types.hpp"

#include <cmath>

namespace dexgrasp::oracle {

/// Near-uniform points on a sphere (golden-angle spiral), outward normals.
inline scene::PointCloud sphere_cloud(const Vec3& center, double radius, int n) {
  scene::PointCloud c;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double r = std::sqrt(1.0 - z * z);
    const Vec3 d(r * std::cos(golden * i), r * std::sin(golden * i), z);
    c.points.push_back(center + radius * d);
    c.normals.push_back(d);
  }
  return c;
}

/// Transforms points and normals of a cloud.
inline scene::PointCloud transformed(const scene::PointCloud& in, const Transform& t) {
  scene::PointCloud out = in;
  for (auto& p : out.points) p = t * p;
  for (auto& n : out.normals) n = t.linear() * n;
  return out;
}

}  // namespace dexgrasp::oracle
