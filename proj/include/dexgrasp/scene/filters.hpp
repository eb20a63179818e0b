// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/scene/types.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace dexgrasp::scene {

/// One point per occupied voxel (the mean of its points), in voxel-key order.
/// Normals and pixel indices are dropped.
inline PointCloud voxel_downsample(const PointCloud& in, double voxel) {
  if (!(voxel > 0.0)) throw ValidationError("voxel size must be positive");
  std::map<std::array<std::int64_t, 3>, std::pair<Vec3, int>> cells;
  for (const auto& p : in.points) {
    const std::array<std::int64_t, 3> key{static_cast<std::int64_t>(std::floor(p.x() / voxel)),
                                          static_cast<std::int64_t>(std::floor(p.y() / voxel)),
                                          static_cast<std::int64_t>(std::floor(p.z() / voxel))};
    auto& c = cells.try_emplace(key, Vec3::Zero(), 0).first->second;
    c.first += p;
    ++c.second;
  }
  PointCloud out;
  out.points.reserve(cells.size());
  for (const auto& [key, c] : cells) out.points.push_back(c.first / c.second);
  return out;
}

}  // namespace dexgrasp::scene
