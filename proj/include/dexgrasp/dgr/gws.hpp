// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/dgr/force_closure.hpp"
#include "dexgrasp/dgr/quickhull.hpp"
#include "dexgrasp/dgr/wrench.hpp"

#include <algorithm>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace dexgrasp::dgr {

struct HullFacet {
  Vec6 normal = Vec6::Zero();  // outward unit normal
  double offset = 0.0;         // normal . w <= offset inside
};

/// Convex hull of a contact set's edge wrenches (convex combinations summing
/// to one, not the Minkowski sum).
struct GraspWrenchSpace {
  std::vector<Wrench> vertices;
  std::vector<HullFacet> facets;
  bool origin_inside = false;  // strict interiority, decided by the LP test
  Wrench centroid = Wrench::Zero();  // vertex mean, recorded for reference only
};

enum class MetricKind { Inscribed, Enclosing };

inline std::string to_string(MetricKind k) { return k == MetricKind::Inscribed ? "inscribed" : "enclosing"; }

inline MetricKind metric_kind_from_string(const std::string& s) {
  if (s == "inscribed") return MetricKind::Inscribed;
  if (s == "enclosing") return MetricKind::Enclosing;
  throw ValidationError("metric kind must be inscribed|enclosing, got '" + s + "'");
}

struct QualityScore {
  bool force_closure = false;
  double q = 0.0;
  MetricKind metric_kind = MetricKind::Inscribed;
};

/// Drops wrenches equal (within tol) to an earlier one.
inline std::vector<Wrench> unique_wrenches(std::span<const Wrench> ws, double tol = 1e-12) {
  std::vector<Wrench> out;
  for (const auto& w : ws) {
    bool dup = std::any_of(out.begin(), out.end(), [&](const Wrench& u) { return (u - w).norm() <= tol; });
    if (!dup) out.push_back(w);
  }
  return out;
}

/// Hull of the given wrenches. Throws DegenerateHull (carrying the affine
/// dimension) when they do not span six dimensions.
inline GraspWrenchSpace build_gws(std::span<const Wrench> wrenches) {
  GraspWrenchSpace gws;
  gws.vertices = unique_wrenches(wrenches);
  const int dim = affine_dimension<6>(std::span<const Wrench>(gws.vertices));
  if (dim < 6) throw DegenerateHull(dim);
  QuickHull<6> hull{std::span<const Wrench>(gws.vertices)};
  gws.facets.reserve(hull.facets().size());
  for (const auto& f : hull.facets()) gws.facets.push_back(HullFacet{f.normal, f.offset});
  gws.origin_inside = origin_strictly_inside(std::span<const Wrench>(gws.vertices));
  for (const auto& v : gws.vertices) gws.centroid += v;
  gws.centroid /= static_cast<double>(gws.vertices.size());
  return gws;
}

inline GraspWrenchSpace build_gws(std::span<const Contact> contacts, const Vec3& centroid, int edge_count,
                                  double rho) {
  auto w = grasp_wrenches(contacts, centroid, edge_count, rho);
  return build_gws(std::span<const Wrench>(w));
}

/// Inscribed: radius of the largest origin-centred ball inside the hull (zero
/// unless the origin is strictly inside). Enclosing: radius of the smallest
/// origin-centred ball containing the hull.
inline QualityScore quality(const GraspWrenchSpace& gws, MetricKind kind = MetricKind::Inscribed) {
  QualityScore s;
  s.metric_kind = kind;
  s.force_closure = gws.origin_inside;
  if (kind == MetricKind::Enclosing) {
    for (const auto& v : gws.vertices) s.q = std::max(s.q, v.norm());
    return s;
  }
  if (!gws.origin_inside || gws.facets.empty()) return s;
  double q = std::numeric_limits<double>::infinity();
  for (const auto& f : gws.facets) q = std::min(q, f.offset);
  s.q = std::max(q, 0.0);
  return s;
}

/// Convenience: force closure + quality for one contact set. Degenerate wrench
/// sets score zero (inscribed) and are never force closure.
inline QualityScore evaluate_grasp(std::span<const Contact> contacts, const Vec3& centroid, int edge_count,
                                   MetricKind kind = MetricKind::Inscribed) {
  QualityScore s;
  s.metric_kind = kind;
  if (contacts.empty()) return s;
  const double rho = torque_scale(contacts, centroid);
  auto w = grasp_wrenches(contacts, centroid, edge_count, rho);
  s.force_closure = origin_strictly_inside(std::span<const Wrench>(w));
  if (kind == MetricKind::Inscribed && !s.force_closure) return s;
  try {
    s = quality(build_gws(std::span<const Wrench>(w)), kind);
  } catch (const DegenerateHull&) {
    if (kind == MetricKind::Enclosing)
      for (const auto& v : w) s.q = std::max(s.q, v.norm());
  }
  return s;
}

}  // namespace dexgrasp::dgr
