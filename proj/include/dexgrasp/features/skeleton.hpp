// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/core/geometry.hpp"
#include "dexgrasp/scene/types.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace dexgrasp::features {

using scene::BinaryMask;

struct Pixel {
  int x = 0, y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
  friend auto operator<=>(const Pixel& a, const Pixel& b) {
    // row-major order: smallest y first, then smallest x
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

struct Skeleton {
  std::vector<Pixel> pixels;  // row-major order
};

/// Largest 8-connected component of the mask. Among equally large components
/// the one whose first pixel comes first in row-major order wins.
inline BinaryMask largest_component(const BinaryMask& mask) {
  const int w = mask.width, h = mask.height;
  std::vector<int> label(mask.data.size(), -1);
  std::vector<std::size_t> sizes;
  std::vector<int> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int start = y * w + x;
      if (!mask.test(x, y) || label[static_cast<std::size_t>(start)] >= 0) continue;
      const int id = static_cast<int>(sizes.size());
      sizes.push_back(0);
      stack.push_back(start);
      label[static_cast<std::size_t>(start)] = id;
      while (!stack.empty()) {
        const int p = stack.back();
        stack.pop_back();
        ++sizes.back();
        const int px = p % w, py = p / w;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = px + dx, ny = py + dy;
            if (!mask.inside(nx, ny) || !mask.test(nx, ny)) continue;
            const int q = ny * w + nx;
            if (label[static_cast<std::size_t>(q)] >= 0) continue;
            label[static_cast<std::size_t>(q)] = id;
            stack.push_back(q);
          }
      }
    }
  }
  if (sizes.empty()) throw EmptyMask("mask has no set pixel");
  int best = 0;
  for (int i = 1; i < static_cast<int>(sizes.size()); ++i)
    if (sizes[static_cast<std::size_t>(i)] > sizes[static_cast<std::size_t>(best)]) best = i;
  BinaryMask out(w, h, 0);
  for (std::size_t i = 0; i < label.size(); ++i) out.data[i] = label[i] == best ? 1 : 0;
  return out;
}

/// Zhang-Suen two-subiteration thinning, run until no pixel changes.
inline BinaryMask thin(const BinaryMask& mask) {
  BinaryMask img = mask;
  const int w = img.width, h = img.height;
  auto at = [&](int x, int y) -> int { return img.inside(x, y) && img.test(x, y) ? 1 : 0; };
  std::vector<int> kill;
  for (bool changed = true; changed;) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      kill.clear();
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (!img.test(x, y)) continue;
          // P2..P9 clockwise from north
          const std::array<int, 8> p{at(x, y - 1), at(x + 1, y - 1), at(x + 1, y), at(x + 1, y + 1),
                                     at(x, y + 1), at(x - 1, y + 1), at(x - 1, y), at(x - 1, y - 1)};
          int b = 0, a = 0;
          for (int i = 0; i < 8; ++i) {
            b += p[static_cast<std::size_t>(i)];
            a += p[static_cast<std::size_t>(i)] == 0 && p[static_cast<std::size_t>((i + 1) % 8)] == 1;
          }
          if (b < 2 || b > 6 || a != 1) continue;
          const int n = p[0], e = p[2], s = p[4], wst = p[6];
          const bool ok = pass == 0 ? (n * e * s == 0 && e * s * wst == 0) : (n * e * wst == 0 && n * s * wst == 0);
          if (ok) kill.push_back(y * w + x);
        }
      }
      for (int idx : kill) img.data[static_cast<std::size_t>(idx)] = 0;
      changed = changed || !kill.empty();
    }
  }
  return img;
}

inline std::vector<Pixel> set_pixels(const BinaryMask& m) {
  std::vector<Pixel> out;
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x)
      if (m.test(x, y)) out.push_back({x, y});
  return out;
}

/// Skeleton of the largest connected component of the mask.
inline Skeleton skeletonize(const BinaryMask& mask) {
  return Skeleton{set_pixels(thin(largest_component(mask)))};
}

/// Mean pixel coordinate of the set pixels.
inline Vec2 pixel_centroid(const BinaryMask& mask) {
  Vec2 sum = Vec2::Zero();
  std::size_t n = 0;
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x)
      if (mask.test(x, y)) {
        sum += Vec2(x, y);
        ++n;
      }
  if (n == 0) throw EmptyMask("mask has no set pixel");
  return sum / static_cast<double>(n);
}

}  // namespace dexgrasp::features
