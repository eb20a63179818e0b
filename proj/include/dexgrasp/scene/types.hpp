// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/core/geometry.hpp"
#include "dexgrasp/core/json_util.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dexgrasp::scene {

/// Pinhole intrinsics. Camera frame: x right, y down, z forward.
struct CameraIntrinsics {
  double fx = 0, fy = 0, cx = 0, cy = 0;
  int width = 0, height = 0;

  void validate() const {
    if (!(fx > 0) || !(fy > 0)) throw ValidationError("focal lengths must be positive");
    if (width <= 0 || height <= 0) throw ValidationError("image size must be positive");
    if (!(cx >= 0 && cx < width && cy >= 0 && cy < height))
      throw ValidationError("principal point outside the image");
  }

  /// Pixel coordinates (u, v) of a camera-frame point.
  Vec2 project(const Vec3& p) const { return {fx * p.x() / p.z() + cx, fy * p.y() / p.z() + cy}; }

  static CameraIntrinsics from_json(const Json& j) {
    CameraIntrinsics k{require<double>(j, "fx"), require<double>(j, "fy"), require<double>(j, "cx"),
                       require<double>(j, "cy"), require<int>(j, "width"), require<int>(j, "height")};
    k.validate();
    return k;
  }
  Json to_json() const {
    return {{"fx", fx}, {"fy", fy}, {"cx", cx}, {"cy", cy}, {"width", width}, {"height", height}};
  }
};

/// Row-major raster.
template <class T>
struct Raster {
  int width = 0, height = 0;
  std::vector<T> data;

  Raster() = default;
  Raster(int w, int h, T fill = T{}) : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  T& operator()(int u, int v) { return data[static_cast<std::size_t>(v) * width + u]; }
  const T& operator()(int u, int v) const { return data[static_cast<std::size_t>(v) * width + u]; }
  bool inside(int u, int v) const { return u >= 0 && v >= 0 && u < width && v < height; }
  bool same_size(int w, int h) const { return width == w && height == h; }
};

/// Metric depth; 0 (or any non-finite / non-positive value) marks an invalid pixel.
struct DepthImage : Raster<double> {
  using Raster::Raster;
  bool valid(int u, int v) const {
    const double z = (*this)(u, v);
    return std::isfinite(z) && z > 0.0;
  }
};

struct BinaryMask : Raster<std::uint8_t> {
  using Raster::Raster;
  bool test(int u, int v) const { return (*this)(u, v) != 0; }
  std::size_t count() const {
    std::size_t n = 0;
    for (auto b : data) n += b != 0;
    return n;
  }
};

using Rgb = std::array<std::uint8_t, 3>;
using RgbImage = Raster<Rgb>;

struct PointCloud {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;     // empty or one per point
  std::vector<int> pixel_index;  // empty or v * width + u per point

  std::size_t size() const { return points.size(); }
  bool has_normals() const { return !normals.empty(); }
};

struct SceneFrame {
  RgbImage rgb;
  DepthImage depth;
  BinaryMask mask;
  CameraIntrinsics intrinsics;

  void validate() const {
    intrinsics.validate();
    const int w = intrinsics.width, h = intrinsics.height;
    if (!depth.same_size(w, h)) throw ValidationError("depth size does not match intrinsics");
    if (!mask.same_size(w, h)) throw ValidationError("mask size does not match depth");
    if (!rgb.data.empty() && !rgb.same_size(w, h)) throw ValidationError("rgb size does not match depth");
  }
};

}  // namespace dexgrasp::scene
