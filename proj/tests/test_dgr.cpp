// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#include "dexgrasp/core/json_util.hpp"
#include "dexgrasp/dgr/force_closure.hpp"
#include "dexgrasp/dgr/friction.hpp"
#include "dexgrasp/dgr/gws.hpp"
#include "dexgrasp/dgr/linear_program.hpp"
#include "dexgrasp/dgr/quickhull.hpp"
#include "dexgrasp/dgr/ranking.hpp"
#include "dexgrasp/dgr/wrench.hpp"
#include "dexgrasp/oracle/oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace dexgrasp::dgr {
namespace {

std::vector<Wrench> cross_polytope() {
  std::vector<Wrench> v;
  for (int i = 0; i < 6; ++i)
    for (double s : {1.0, -1.0}) {
      Wrench w = Wrench::Zero();
      w[i] = s;
      v.push_back(w);
    }
  return v;
}

TEST(LinearProgram, SolvesSmallProblem) {
  // max x + y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
  Eigen::MatrixXd a(2, 4);
  a << 1, 2, 1, 0, 3, 1, 0, 1;
  Eigen::VectorXd b(2);
  b << 4, 6;
  Eigen::VectorXd c(4);
  c << 1, 1, 0, 0;
  auto r = solve_standard_form(a, b, c);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_NEAR(r.objective, 2.8, 1e-12);  // vertex (1.6, 1.2)
  EXPECT_NEAR(r.x[0], 1.6, 1e-12);
}

TEST(LinearProgram, DetectsInfeasibility) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 1, 1, 1;
  Eigen::VectorXd b(2);
  b << 1, 2;
  auto r = solve_standard_form(a, b, Eigen::VectorXd::Zero(2));
  EXPECT_EQ(r.status, LpStatus::Infeasible);
}

TEST(ContactWrenches, FrictionlessCentralContactIsPureForce) {
  Contact c{Vec3(1, 0, 0), Vec3(-1, 0, 0), 0.0};
  auto ws = contact_wrenches(c, Vec3::Zero(), 8, 1.0);
  ASSERT_EQ(ws.size(), 8u);
  auto distinct = unique_wrenches(ws);
  ASSERT_EQ(distinct.size(), 1u);
  Wrench expect;
  expect << -1, 0, 0, 0, 0, 0;
  EXPECT_LT((distinct[0] - expect).norm(), 1e-15);
}

TEST(ContactWrenches, FirstEdgeMatchesHandComputation) {
  // n = (-1,0,0): least aligned axis is y, t1 = n x y = (0,0,-1)
  // f0 = normalize(n + 0.5 t1) = (-1, 0, -0.5) / sqrt(1.25)
  // tau0 = (1,0,0) x f0 = (0, -f0z, f0y) = (0, 0.5/sqrt(1.25), 0)
  Contact c{Vec3(1, 0, 0), Vec3(-1, 0, 0), 0.5};
  const double rho = 2.0;
  auto ws = contact_wrenches(c, Vec3::Zero(), 8, rho);
  ASSERT_EQ(ws.size(), 8u);
  const double k = 1.0 / std::sqrt(1.25);
  Wrench expect;
  expect << -k, 0, -0.5 * k, 0, 0.5 * k / rho, 0;
  EXPECT_LT((ws[0] - expect).norm(), 1e-14);
  for (const auto& w : ws) {
    EXPECT_NEAR(wrench_force(w).norm(), 1.0, 1e-14);
    // torque is orthogonal to the moment arm
    EXPECT_NEAR(wrench_torque(w).dot(Vec3(1, 0, 0)), 0.0, 1e-15);
  }
}

TEST(ContactWrenches, TorqueScaleBoundsTorques) {
  Rng rng(3);
  auto cs = oracle::random_sphere_contacts(rng, 5, 0.1, 1.0);
  for (auto& c : cs) c.point *= rng.uniform(0.5, 2.0);
  const Vec3 centroid(0.1, -0.2, 0.05);
  const double rho = torque_scale(cs, centroid);
  for (const auto& w : grasp_wrenches(cs, centroid, 8, rho)) EXPECT_LE(wrench_torque(w).norm(), 1.0 + 1e-12);
}

TEST(ForceClosure, TetrahedronAccepted) {
  EXPECT_TRUE(force_closure(oracle::tetrahedron_contacts(0.5), Vec3::Zero()));
}

TEST(ForceClosure, AntipodalPairRejected) {
  auto cs = oracle::antipodal_contacts(0.5);
  // every edge wrench has zero torque about x
  for (const auto& w : grasp_wrenches(cs, Vec3::Zero(), 8)) EXPECT_NEAR(w[3], 0.0, 1e-15);
  EXPECT_FALSE(force_closure(cs, Vec3::Zero()));
}

TEST(ForceClosure, SingleContactRejected) {
  for (double mu : {0.1, 0.5, 1.0, 2.0})
    EXPECT_FALSE(force_closure(std::vector<Contact>{Contact{Vec3(0, 0, 1), Vec3(0, 0, -1), mu}}, Vec3::Zero()));
}

TEST(ForceClosure, AgreesWithRayShootingOracle) {
  Rng rng(11);
  int fc_count = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int count = 1 + static_cast<int>(rng.uniform() * 6);
    auto cs = oracle::random_sphere_contacts(rng, count, 0.1, 1.0);
    auto w = grasp_wrenches(cs, Vec3::Zero(), 8);
    bool engine = origin_strictly_inside(w);
    bool ref = oracle::ray_shooting_force_closure(w);
    ASSERT_EQ(engine, ref) << "trial " << trial << " contacts " << count;
    fc_count += engine;
  }
  // the fixture family must exercise both verdicts
  EXPECT_GT(fc_count, 20);
  EXPECT_LT(fc_count, 180);
}

TEST(QuickHull, CrossPolytopeFacets) {
  auto v = cross_polytope();
  QuickHull<6> hull{std::span<const Wrench>(v)};
  EXPECT_EQ(hull.facets().size(), 64u);
  for (const auto& f : hull.facets()) EXPECT_NEAR(f.offset, 1.0 / std::sqrt(6.0), 1e-9);
}

TEST(QuickHull, ContainsAllInputPoints) {
  Rng rng(5);
  auto cs = oracle::random_sphere_contacts(rng, 5, 0.1, 1.0);
  auto w = grasp_wrenches(cs, Vec3::Zero(), 8);
  auto gws = build_gws(w);
  ASSERT_FALSE(gws.facets.empty());
  for (const auto& f : gws.facets)
    for (const auto& v : gws.vertices) EXPECT_LE(f.normal.dot(v) - f.offset, 1e-9);
}

TEST(QuickHull, ThreeDimensionalCube) {
  std::vector<Vec3> pts;
  for (int i = 0; i < 8; ++i) pts.emplace_back(i & 1, (i >> 1) & 1, (i >> 2) & 1);
  pts.emplace_back(0.5, 0.5, 0.5);
  QuickHull<3> hull{std::span<const Vec3>(pts)};
  EXPECT_EQ(hull.facets().size(), 12u);  // two triangles per face
  for (const auto& f : hull.facets()) EXPECT_NEAR(f.normal.dot(Vec3(0.5, 0.5, 0.5)) - f.offset, -0.5, 1e-9);
}

TEST(Gws, CrossPolytopeQuality) {
  auto gws = build_gws(cross_polytope());
  EXPECT_TRUE(gws.origin_inside);
  EXPECT_NEAR(quality(gws, MetricKind::Inscribed).q, 1.0 / std::sqrt(6.0), 1e-6);
  EXPECT_NEAR(quality(gws, MetricKind::Enclosing).q, 1.0, 1e-12);
}

TEST(Gws, TetrahedronHullContainsOrigin) {
  auto gws = build_gws(oracle::tetrahedron_contacts(0.5), Vec3::Zero(), 8, 1.0);
  EXPECT_TRUE(gws.origin_inside);
  for (const auto& f : gws.facets) EXPECT_GT(f.offset, 0.0);
}

TEST(Gws, FrictionlessAxisContactsDegenerateInTorque) {
  std::vector<Contact> cs;
  for (int i = 0; i < 3; ++i)
    for (double s : {1.0, -1.0}) {
      Vec3 p = Vec3::Zero();
      p[i] = s;
      cs.push_back(Contact{p, -p, 0.0});
    }
  try {
    build_gws(cs, Vec3::Zero(), 8, 1.0);
    FAIL() << "expected DegenerateHull";
  } catch (const DegenerateHull& e) {
    EXPECT_EQ(e.affine_dim(), 3);
  }
}

TEST(Gws, SingleFrictionlessContactIsAPoint) {
  std::vector<Contact> cs{Contact{Vec3(0, 0, 1), Vec3(0, 0, -1), 0.0}};
  try {
    build_gws(cs, Vec3::Zero(), 8, 1.0);
    FAIL() << "expected DegenerateHull";
  } catch (const DegenerateHull& e) {
    EXPECT_EQ(e.affine_dim(), 0);
  }
}

TEST(Quality, NonForceClosureScoresZero) {
  auto s = evaluate_grasp(oracle::antipodal_contacts(0.5), Vec3::Zero(), 8);
  EXPECT_FALSE(s.force_closure);
  EXPECT_EQ(s.q, 0.0);
}

TEST(Quality, TetrahedronMatchesDirectionSampling) {
  auto cs = oracle::tetrahedron_contacts(0.5);
  auto w = grasp_wrenches(cs, Vec3::Zero(), 8);
  double engine = quality(build_gws(w)).q;
  double ref = oracle::direction_sampling_quality(w, 17);
  ASSERT_GT(engine, 0.0);
  EXPECT_LE(std::abs(engine - ref) / ref, 0.10);
  // sampling approaches from above
  EXPECT_GE(ref, engine * (1.0 - 1e-6));
}

std::vector<Contact> fixture_contacts(const Json& f) {
  std::vector<Contact> cs;
  for (const auto& c : f.at("contacts")) {
    auto p = c.at("point").get<std::vector<double>>();
    auto n = c.at("normal").get<std::vector<double>>();
    cs.push_back({Vec3(p[0], p[1], p[2]), Vec3(n[0], n[1], n[2]), c.at("mu").get<double>()});
  }
  return cs;
}

TEST(Quality, RandomFixturesMatchFrozenQhull) {
  const Json doc = load_json(std::string(DEXGRASP_TEST_DATA_DIR) + "/quality_oracle.json");
  int index = 0, closed = 0;
  for (const auto& f : doc.at("fixtures")) {
    auto cs = fixture_contacts(f);
    auto s = evaluate_grasp(cs, Vec3::Zero(), 8);
    EXPECT_EQ(s.force_closure, f.at("force_closure_m8").get<bool>()) << "fixture " << index;
    if (s.force_closure && f.at("force_closure_m8").get<bool>()) {
      const double ref = f.at("q_m8").get<double>();
      EXPECT_NEAR(s.q, ref, 1e-6 * std::max(ref, 1e-3)) << "fixture " << index;
      ++closed;
    }
    ++index;
  }
  EXPECT_EQ(index, 200);
  EXPECT_GT(closed, 50);
}

TEST(Quality, AddingAContactNeverDecreasesInscribedQ) {
  Rng rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    auto cs = oracle::random_sphere_contacts(rng, 3 + static_cast<int>(rng.uniform() * 3), 0.1, 1.0);
    auto extra = oracle::random_sphere_contacts(rng, 1, 0.1, 1.0);
    auto grown = cs;
    grown.push_back(extra[0]);
    // a common torque scale keeps the two wrench sets comparable
    const double rho = 1.0;
    auto w0 = grasp_wrenches(cs, Vec3::Zero(), 8, rho);
    auto w1 = grasp_wrenches(grown, Vec3::Zero(), 8, rho);
    double q0 = origin_strictly_inside(w0) ? quality(build_gws(w0)).q : 0.0;
    double q1 = origin_strictly_inside(w1) ? quality(build_gws(w1)).q : 0.0;
    EXPECT_GE(q1, q0 - 1e-9) << "trial " << trial;
  }
}

TEST(Quality, ScaleInvariance) {
  Rng rng(31);
  int checked = 0;
  while (checked < 10) {
    auto cs = oracle::random_sphere_contacts(rng, 5, 0.2, 1.0);
    const Vec3 c = Vec3::Zero();
    if (!force_closure(cs, c)) continue;
    auto scaled = cs;
    for (auto& s : scaled) s.point *= 3.7;
    auto a = evaluate_grasp(cs, c, 8);
    auto b = evaluate_grasp(scaled, c, 8);
    EXPECT_EQ(a.force_closure, b.force_closure);
    EXPECT_NEAR(a.q, b.q, 1e-6);
    ++checked;
  }
}

TEST(Quality, RotationEquivariance) {
  Rng rng(37);
  int checked = 0;
  while (checked < 10) {
    auto cs = oracle::random_sphere_contacts(rng, 5, 0.2, 1.0);
    // tilt normals off the radial direction so moment arms are generic
    for (auto& c : cs) c.normal = (c.normal + 0.3 * Vec3(rng.normal(), rng.normal(), rng.normal())).normalized();
    const Vec3 centroid(0.1, 0.0, -0.1);
    if (!force_closure(cs, centroid)) continue;
    Mat3 r = euler_xyz_to_matrix(Vec3(0.3, -1.1, 2.0));
    auto rotated = cs;
    for (auto& s : rotated) {
      s.point = r * s.point;
      s.normal = r * s.normal;
    }
    auto a = evaluate_grasp(cs, centroid, 8);
    auto b = evaluate_grasp(rotated, r * centroid, 8);
    EXPECT_EQ(a.force_closure, b.force_closure);
    EXPECT_NEAR(a.q, b.q, 1e-9);
    ++checked;
  }
}

TEST(Ranking, KeepsBestThreeForceClosure) {
  std::vector<QualityScore> s;
  for (double q : {0.3, 0.1, 0.5, 0.5, 0.2}) s.push_back({true, q, MetricKind::Inscribed});
  EXPECT_EQ(rank_top(s), (std::vector<int>{2, 3, 0}));
  s[2].force_closure = false;
  EXPECT_EQ(rank_top(s), (std::vector<int>{3, 0, 4}));
}

TEST(Ranking, NoForceClosureThrows) {
  EXPECT_THROW(rank_top({}), NoForceClosureCandidate);
  std::vector<QualityScore> s(2);
  EXPECT_THROW(rank_top(s), NoForceClosureCandidate);
}

TEST(Friction, MatchesFreeFormAnswers) {
  auto t = FrictionTable::load(std::string(DEXGRASP_DATA_DIR) + "/friction_table.json");
  EXPECT_EQ(t.match("shiny metallic surface"), "metal");
  EXPECT_EQ(t.match("Rubber"), "rubber");
  EXPECT_EQ(t.match("unknown stuff"), "default");
  EXPECT_DOUBLE_EQ(t.mu("metal"), 0.3);
  EXPECT_DOUBLE_EQ(t.mu("default"), t.default_mu);
}

TEST(Friction, RejectsOutOfRangeCoefficients) {
  EXPECT_THROW(FrictionTable::from_json(Json::parse(R"({"entries":{"ice":0},"default":0.3})")), ValidationError);
  EXPECT_THROW(FrictionTable::from_json(Json::parse(R"({"entries":{},"default":3})")), ValidationError);
  EXPECT_THROW(FrictionTable::from_json(Json::parse(R"({"entries":{}})")), MissingField);
}

}  // namespace
}  // namespace dexgrasp::dgr
