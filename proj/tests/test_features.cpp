// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#include "dexgrasp/core/random.hpp"
#include "dexgrasp/features/feature_vector.hpp"
#include "dexgrasp/features/skeleton.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace dexgrasp;
using namespace dexgrasp::features;

namespace {

BinaryMask bar_mask(int w, int h, int x0, int y0, int bw, int bh) {
  BinaryMask m(w, h, 0);
  for (int y = y0; y < y0 + bh; ++y)
    for (int x = x0; x < x0 + bw; ++x) m(x, y) = 1;
  return m;
}

BinaryMask rotate90(const BinaryMask& m) {
  // (x, y) -> (H - 1 - y, x)
  BinaryMask r(m.height, m.width, 0);
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x) r(m.height - 1 - y, x) = m(x, y);
  return r;
}

BinaryMask from_pixels(const std::vector<Pixel>& px, int w, int h) {
  BinaryMask m(w, h, 0);
  for (auto p : px) m(p.x, p.y) = 1;
  return m;
}

// Points on a cylinder of radius r and length len about `axis` through c.
std::vector<Vec3> cylinder_points(Rng& rng, const Vec3& c, const Vec3& axis, double r, double len, double sigma, int n) {
  const auto [t1, t2] = tangent_basis(axis);
  std::vector<Vec3> pts;
  for (int i = 0; i < n; ++i) {
    const double s = rng.uniform(-len / 2, len / 2), a = rng.uniform(0, 2 * kPi);
    Vec3 p = c + s * axis + r * (std::cos(a) * t1 + std::sin(a) * t2);
    pts.push_back(p + sigma * Vec3(rng.normal(), rng.normal(), rng.normal()));
  }
  return pts;
}

}  // namespace

TEST(Skeleton, ThinLineIsFixed) {
  auto m = bar_mask(30, 5, 3, 2, 20, 1);
  auto s = skeletonize(m);
  EXPECT_EQ(s.pixels, set_pixels(m));
}

TEST(Skeleton, BarCenterline) {
  auto m = bar_mask(61, 9, 5, 3, 51, 3);  // rows 3..5, columns 5..55
  auto s = skeletonize(m);
  std::set<int> cols;
  for (auto p : s.pixels) {
    EXPECT_LE(std::abs(p.y - 4), 1);
    EXPECT_TRUE(m.test(p.x, p.y));
    cols.insert(p.x);
  }
  EXPECT_GE(cols.size(), 45u);
}

TEST(Skeleton, DiskCollapsesToCenter) {
  BinaryMask m(31, 31, 0);
  for (int y = 0; y < 31; ++y)
    for (int x = 0; x < 31; ++x)
      if ((x - 15) * (x - 15) + (y - 15) * (y - 15) <= 100) m(x, y) = 1;  // diameter 21
  auto s = skeletonize(m);
  ASSERT_FALSE(s.pixels.empty());
  for (auto p : s.pixels) EXPECT_LE(std::hypot(p.x - 15, p.y - 15), 2.0);
}

TEST(Skeleton, IdempotentAndSubset) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    BinaryMask m(40, 30, 0);
    // union of random rectangles and disks
    for (int k = 0; k < 4; ++k) {
      int cx = static_cast<int>(rng.uniform(5, 35)), cy = static_cast<int>(rng.uniform(5, 25));
      int rx = static_cast<int>(rng.uniform(1, 9)), ry = static_cast<int>(rng.uniform(1, 6));
      for (int y = cy - ry; y <= cy + ry; ++y)
        for (int x = cx - rx; x <= cx + rx; ++x)
          if (m.inside(x, y)) m(x, y) = 1;
    }
    auto s = skeletonize(m);
    for (auto p : s.pixels) EXPECT_TRUE(m.test(p.x, p.y));
    auto again = skeletonize(from_pixels(s.pixels, 40, 30));
    EXPECT_EQ(again.pixels, s.pixels);
  }
}

TEST(Skeleton, KeepsLargestComponent) {
  auto m = bar_mask(40, 20, 2, 2, 30, 3);
  m(35, 15) = 1;
  auto s = skeletonize(m);
  for (auto p : s.pixels) EXPECT_LT(p.y, 6);
  EXPECT_THROW(skeletonize(BinaryMask(5, 5, 0)), EmptyMask);
}

TEST(Centroid, PixelMean) {
  EXPECT_TRUE(pixel_centroid(from_pixels({{0, 0}, {0, 2}, {2, 0}, {2, 2}}, 3, 3)).isApprox(Vec2(1, 1)));
  EXPECT_TRUE(pixel_centroid(from_pixels({{5, 7}}, 8, 8)).isApprox(Vec2(5, 7)));
  EXPECT_TRUE(pixel_centroid(from_pixels({{0, 0}, {3, 0}}, 4, 1)).isApprox(Vec2(1.5, 0)));
  EXPECT_THROW(pixel_centroid(BinaryMask(2, 2, 0)), EmptyMask);
}

TEST(Centroid, CharacteristicCentroidRules) {
  scene::DepthImage d(60, 10, 0.8);
  scene::CameraIntrinsics k{100, 100, 30, 5, 60, 10};
  auto c = characteristic_centroid(Skeleton{{{0, 0}, {2, 0}}}, Vec2(1, 0), d, k);
  EXPECT_EQ(c.pixel, (Pixel{0, 0}));
  auto self = characteristic_centroid(Skeleton{{{3, 4}, {7, 4}}}, Vec2(7, 4), d, k);
  EXPECT_EQ(self.pixel, (Pixel{7, 4}));
  EXPECT_TRUE(self.point.isApprox(Vec3((7 - 30) * 0.8 / 100, (4 - 5) * 0.8 / 100, 0.8)));

  // 3x51 bar: brute-force nearest skeleton pixel to the mask centroid
  auto m = bar_mask(60, 10, 4, 3, 51, 3);
  auto s = skeletonize(m);
  const Vec2 pc = pixel_centroid(m);
  auto cs = characteristic_centroid(s, pc, d, k);
  double best = 1e9;
  for (auto p : s.pixels) best = std::min(best, (Vec2(p.x, p.y) - pc).norm());
  EXPECT_DOUBLE_EQ((Vec2(cs.pixel.x, cs.pixel.y) - pc).norm(), best);
  EXPECT_EQ(cs.pixel, (Pixel{29, 4}));

  scene::DepthImage empty(60, 10, 0.0);
  EXPECT_THROW(characteristic_centroid(s, pc, empty, k), NoValidDepth);
}

TEST(Centroid, MedianDepthRejectsOutliers) {
  scene::DepthImage d(9, 9, 0.5);
  d(4, 4) = 9.0;
  d(3, 3) = 0.0;
  EXPECT_DOUBLE_EQ(window_median_depth(d, 4, 4), 0.5);
}

TEST(Tangent, LinesAndCanonicalSign) {
  Skeleton row;
  for (int x = 0; x < 20; ++x) row.pixels.push_back({x, 5});
  EXPECT_TRUE(skeleton_tangent(row, {10, 5}).isApprox(Vec2(1, 0)));
  Skeleton diag;
  for (int i = 0; i < 20; ++i) diag.pixels.push_back({i, i});
  EXPECT_NEAR((skeleton_tangent(diag, {10, 10}) - Vec2(std::sqrt(0.5), std::sqrt(0.5))).norm(), 0.0, 1e-6);
  Skeleton anti;
  for (int i = 0; i < 20; ++i) anti.pixels.push_back({i, 20 - i});
  const Vec2 ta = skeleton_tangent(anti, {10, 10});
  EXPECT_GT(ta.x(), 0.0);
  EXPECT_THROW(skeleton_tangent(Skeleton{{{0, 0}}}, {0, 0}), InsufficientSupport);
}

TEST(Tangent, NoisyVertical) {
  Rng rng(12);
  Skeleton s;
  for (int y = 0; y < 40; ++y) s.pixels.push_back({20 + static_cast<int>(std::floor(rng.uniform(-1, 2))), y});
  const Vec2 t = skeleton_tangent(s, {20, 20});
  EXPECT_LT(std::acos(std::min(1.0, std::abs(t.dot(Vec2(0, 1))))), 5.0 * kPi / 180.0);
  EXPECT_TRUE(t.x() > 0.0 || (t.x() == 0.0 && t.y() > 0.0));
}

TEST(PrincipalAxis, Segment) {
  std::vector<Vec3> pts;
  for (int i = 0; i <= 100; ++i) pts.emplace_back(i / 100.0, 0, 0);
  auto ax = principal_axis(pts);
  EXPECT_NEAR((ax.first() - Vec3::UnitX()).norm(), 0.0, 1e-9);
  EXPECT_GE(ax.eigenvalues[0], ax.eigenvalues[1]);
  EXPECT_GE(ax.eigenvalues[1], ax.eigenvalues[2]);
  EXPECT_NEAR((ax.eigenvectors.transpose() * ax.eigenvectors - Mat3::Identity()).norm(), 0.0, 1e-6);
  EXPECT_THROW(principal_axis(std::vector<Vec3>{Vec3::Zero(), Vec3::UnitX()}), TooFewPoints);
}

TEST(PrincipalAxis, NoisyCylinder) {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec3 axis = Vec3(rng.normal(), rng.normal(), rng.normal()).normalized();
    auto pts = cylinder_points(rng, Vec3(0.1, -0.05, 0.7), axis, 0.03, 0.2, 0.001, 1000);
    const Vec3 v1 = principal_axis(pts).first();
    EXPECT_LT(std::acos(std::min(1.0, std::abs(v1.dot(axis)))), 3.0 * kPi / 180.0);
  }
}

TEST(PrincipalAxis, IcosahedronIsDegenerate) {
  // vertices of a regular icosahedron have an isotropic second moment
  const double g = (1 + std::sqrt(5.0)) / 2;
  std::vector<Vec3> pts;
  for (double a : {-1.0, 1.0})
    for (double b : {-g, g}) {
      pts.emplace_back(0, a, b);
      pts.emplace_back(a, b, 0);
      pts.emplace_back(b, 0, a);
    }
  EXPECT_TRUE(principal_axis(pts).degenerate);
  std::vector<Vec3> box{Vec3(1, 0, 0), Vec3(-1, 0, 0), Vec3(0, 1, 0), Vec3(0, -1, 0), Vec3(0, 0, 1), Vec3(0, 0, -1)};
  EXPECT_TRUE(principal_axis(box).degenerate);
}

TEST(FeatureVectorTest, Examples) {
  CharacteristicCentroid c{{0, 0}, Vec3(0.1, 0.2, 0.5)};
  PrincipalAxes ax;
  ax.eigenvectors = Mat3::Identity();
  auto fv = feature_vector(c, Vec2(1, 0), ax);
  EXPECT_TRUE(fv.direction.isApprox(Vec3(1, 0, 0)));
  EXPECT_EQ(fv.origin, c.point);

  const double r = std::sqrt(0.5);
  ax.eigenvectors.col(0) = Vec3(r, 0, r);
  fv = feature_vector(c, Vec2(1, 0), ax);
  EXPECT_NEAR((fv.direction - Vec3(1, 0, r).normalized()).norm(), 0.0, 1e-12);

  ax.eigenvectors.col(0) = Vec3(0, -1, 0);
  fv = feature_vector(c, Vec2(0, 1), ax);
  EXPECT_TRUE(fv.direction.isApprox(Vec3(0, 1, 0)));
  EXPECT_DOUBLE_EQ(fv.pca_z, 0.0);

  ax.eigenvectors.col(0) = Vec3(0, 0, 0);
  EXPECT_THROW(feature_vector(c, Vec2(0, 0), ax), ZeroDirection);
}

TEST(FeatureVectorTest, UnitAndParallelToTangent) {
  Rng rng(30);
  for (int i = 0; i < 100; ++i) {
    const double a = rng.uniform(0, 2 * kPi);
    const Vec2 t(std::cos(a), std::sin(a));
    PrincipalAxes ax;
    ax.eigenvectors.col(0) = Vec3(rng.normal(), rng.normal(), rng.normal()).normalized();
    auto fv = feature_vector({}, t, ax);
    EXPECT_NEAR(fv.direction.norm(), 1.0, 1e-6);
    const Vec2 xy = fv.direction.head<2>().normalized();
    EXPECT_LT(std::abs(xy.x() * t.y() - xy.y() * t.x()), 1e-6);
    EXPECT_GT(xy.dot(t), 0.0);
  }
}

TEST(Equivariance, QuarterTurn) {
  // an elongated L-free blob: a tilted thick bar
  BinaryMask m(50, 40, 0);
  for (int y = 0; y < 40; ++y)
    for (int x = 0; x < 50; ++x) {
      const double u = (x - 24.3) * 0.8 + (y - 19.6) * 0.6, v = -(x - 24.3) * 0.6 + (y - 19.6) * 0.8;
      if (std::abs(u) <= 18 && std::abs(v) <= 2.5) m(x, y) = 1;
    }
  const BinaryMask r = rotate90(m);
  scene::DepthImage d0(50, 40, 1.0), d1(40, 50, 1.0);
  scene::CameraIntrinsics k0{100, 100, 25, 20, 50, 40}, k1{100, 100, 20, 25, 40, 50};
  auto s0 = skeletonize(m);
  auto s1 = skeletonize(r);
  auto c0 = characteristic_centroid(s0, pixel_centroid(m), d0, k0);
  auto c1 = characteristic_centroid(s1, pixel_centroid(r), d1, k1);
  // pixel (x, y) maps to (H - 1 - y, x)
  EXPECT_LE(std::hypot(c1.pixel.x - (40 - 1 - c0.pixel.y), c1.pixel.y - c0.pixel.x), 1.0);
  const Vec2 t0 = skeleton_tangent(s0, c0.pixel), t1 = skeleton_tangent(s1, c1.pixel);
  const Vec2 t0r(-t0.y(), t0.x());
  EXPECT_LT(std::acos(std::min(1.0, std::abs(t0r.dot(t1)))), 2.0 * kPi / 180.0);
}
