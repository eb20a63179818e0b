// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace dexgrasp {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Transform = Eigen::Isometry3d;

inline constexpr double kPi = std::numbers::pi;

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

/// Intrinsic X-Y-Z Euler angles: R = Rx(a) * Ry(b) * Rz(c).
inline Mat3 euler_xyz_to_matrix(const Vec3& abc) {
  return (Eigen::AngleAxisd(abc.x(), Vec3::UnitX()) * Eigen::AngleAxisd(abc.y(), Vec3::UnitY()) *
          Eigen::AngleAxisd(abc.z(), Vec3::UnitZ()))
      .toRotationMatrix();
}

inline Vec3 matrix_to_euler_xyz(const Mat3& r) {
  // r(0,2) = sin(b)
  double sb = std::clamp(r(0, 2), -1.0, 1.0);
  double b = std::asin(sb);
  double a, c;
  if (std::abs(sb) < 1.0 - 1e-12) {
    a = std::atan2(-r(1, 2), r(2, 2));
    c = std::atan2(-r(0, 1), r(0, 0));
  } else {
    // gimbal lock: only a + c (or a - c) is observable; put it all in a
    c = 0.0;
    a = std::atan2(r(2, 1), r(1, 1));
  }
  return {wrap_angle(a), wrap_angle(b), wrap_angle(c)};
}

/// 6-D pose vector (x, y, z, a, b, c) with intrinsic XYZ Euler angles.
inline Transform pose_to_transform(const Vec6& m) {
  Transform t = Transform::Identity();
  t.linear() = euler_xyz_to_matrix(m.tail<3>());
  t.translation() = m.head<3>();
  return t;
}

inline Vec6 transform_to_pose(const Transform& t) {
  Vec6 m;
  m << t.translation(), matrix_to_euler_xyz(t.linear());
  return m;
}

/// Smallest rotation taking unit vector `from` onto unit vector `to`.
inline Mat3 minimal_rotation(const Vec3& from, const Vec3& to) {
  return Eigen::Quaterniond::FromTwoVectors(from, to).toRotationMatrix();
}

/// Angle between two (not necessarily unit) vectors, in radians.
inline double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

/// Rotation error vector (axis * angle) taking `from` to `to`.
inline Vec3 rotation_error(const Mat3& from, const Mat3& to) {
  Eigen::AngleAxisd aa(to * from.transpose());
  return aa.axis() * aa.angle();
}

/// Deterministic tangent basis of a unit normal: t1 is built against the
/// coordinate axis least aligned with n (lowest index wins ties).
inline std::pair<Vec3, Vec3> tangent_basis(const Vec3& n) {
  int axis = 0;
  Vec3 mag = n.cwiseAbs();
  for (int i = 1; i < 3; ++i)
    if (mag[i] < mag[axis]) axis = i;
  Vec3 t1 = n.cross(Vec3::Unit(axis)).normalized();
  Vec3 t2 = n.cross(t1);
  return {t1, t2};
}

/// Tangent basis anchored on a reference direction: t1 is the reference
/// projected onto the tangent plane. Falls back to the axis rule when the
/// reference is (nearly) parallel to n. Rotating n and the reference together
/// rotates the basis with them.
inline std::pair<Vec3, Vec3> tangent_basis(const Vec3& n, const Vec3& reference) {
  Vec3 proj = reference - reference.dot(n) * n;
  if (proj.norm() <= 1e-9 * std::max(reference.norm(), 1e-300)) return tangent_basis(n);
  Vec3 t1 = proj.normalized();
  return {t1, n.cross(t1)};
}

}  // namespace dexgrasp
