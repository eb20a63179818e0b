// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/scene/types.hpp"

#include <optional>

namespace dexgrasp::scene {

/// Pinhole back-projection of every valid (and, if a mask is given, masked)
/// pixel. Points are emitted in row-major pixel order.
inline PointCloud back_project(const DepthImage& depth, const CameraIntrinsics& k,
                               const BinaryMask* mask = nullptr) {
  if (mask && !mask->same_size(depth.width, depth.height))
    throw ValidationError("mask size does not match depth");
  PointCloud cloud;
  for (int v = 0; v < depth.height; ++v) {
    for (int u = 0; u < depth.width; ++u) {
      if (mask && !mask->test(u, v)) continue;
      if (!depth.valid(u, v)) continue;
      const double z = depth(u, v);
      cloud.points.emplace_back((u - k.cx) * z / k.fx, (v - k.cy) * z / k.fy, z);
      cloud.pixel_index.push_back(v * depth.width + u);
    }
  }
  if (cloud.points.empty()) throw EmptySelection("no valid masked depth pixel");
  return cloud;
}

inline PointCloud back_project(const DepthImage& depth, const CameraIntrinsics& k, const BinaryMask& mask) {
  return back_project(depth, k, &mask);
}

}  // namespace dexgrasp::scene
