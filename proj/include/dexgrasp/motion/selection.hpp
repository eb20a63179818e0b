// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dexgrasp/core/error.hpp"
#include "dexgrasp/core/json_util.hpp"
#include "dexgrasp/motion/arm.hpp"
#include "dexgrasp/motion/trajectory.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dexgrasp::motion {

/// One ranked grasp offered to the selector.
struct GraspOption {
  Vec6 hand_pose = Vec6::Zero();  // camera frame, intrinsic XYZ Euler
  double q = 0.0;
};

struct MotionPlan {
  int option = -1;  // index into the offered options
  ArmJoints goal = ArmJoints::Zero();
  Trajectory trajectory;
  double cost = 0.0;
};

struct SelectionParams {
  int waypoints = 20;
  double dt = 0.1;
  IkParams ik;
  StompParams stomp;
};

/// Evaluated option used by the reduction below.
struct Evaluated {
  int option = 0;
  double cost = 0.0;
  double q = 0.0;
};

/// Lowest cost, then higher q, then lower option index. Independent of the
/// order in which options were evaluated.
inline int argmin_cost(const std::vector<Evaluated>& e) {
  if (e.empty()) throw NoFeasibleGrasp("no grasp option is reachable by the arm");
  std::size_t best = 0;
  for (std::size_t i = 1; i < e.size(); ++i) {
    const auto& a = e[i];
    const auto& b = e[best];
    if (a.cost < b.cost || (a.cost == b.cost && (a.q > b.q || (a.q == b.q && a.option < b.option)))) best = i;
  }
  return static_cast<int>(best);
}

/// Flange target of a hand pose: camera <- hand <- flange.
inline Transform flange_target(const Vec6& hand_pose, const Transform& flange_in_hand) {
  return pose_to_transform(hand_pose) * flange_in_hand;
}

/// Trajectory and STOMP sections of the arm config document; IK settings come
/// from the already loaded ArmConfig. Absent fields keep their defaults.
inline SelectionParams load_selection_params(const Json& doc, const IkParams& ik) {
  SelectionParams p;
  p.ik = ik;
  if (doc.contains("trajectory")) {
    const Json& t = doc["trajectory"];
    p.waypoints = optional<int>(t, "waypoints", p.waypoints);
    p.dt = optional<double>(t, "dt", p.dt);
  }
  if (doc.contains("stomp")) {
    const Json& s = doc["stomp"];
    p.stomp.iterations = optional<int>(s, "iterations", p.stomp.iterations);
    p.stomp.rollouts = optional<int>(s, "rollouts", p.stomp.rollouts);
    p.stomp.noise = optional<double>(s, "noise", p.stomp.noise);
    p.stomp.clearance = optional<double>(s, "clearance", p.stomp.clearance);
    p.stomp.proxy_radius = optional<double>(s, "proxy_radius", p.stomp.proxy_radius);
    p.stomp.obstacle_weight = optional<double>(s, "obstacle_weight", p.stomp.obstacle_weight);
    p.stomp.sensitivity = optional<double>(s, "sensitivity", p.stomp.sensitivity);
    p.stomp.seed = optional<std::uint64_t>(s, "seed", p.stomp.seed);
  }
  if (p.waypoints < 2 || !(p.dt > 0.0)) throw ValidationError("trajectory: need waypoints >= 2 and dt > 0");
  if (p.stomp.iterations < 0 || p.stomp.rollouts < 1 || !(p.stomp.noise >= 0.0) || !(p.stomp.clearance >= 0.0) ||
      !(p.stomp.proxy_radius >= 0.0) || !(p.stomp.obstacle_weight >= 0.0) || !(p.stomp.sensitivity > 0.0))
    throw ValidationError("stomp: parameters out of range");
  return p;
}

/// For every option: IK from the current joints, linear plan, refinement and
/// motion cost. Options whose IK does not converge are skipped. Throws
/// NoFeasibleGrasp when none remains.
inline MotionPlan select_best(const std::vector<GraspOption>& options, const ArmModel& model, const ArmJoints& current,
                              const Transform& flange_in_hand, const KdTree* obstacles,
                              const SelectionParams& p = {}) {
  if (options.empty()) throw NoFeasibleGrasp("no grasp options to choose from");
  std::vector<MotionPlan> plans;
  std::vector<Evaluated> evals;
  for (std::size_t i = 0; i < options.size(); ++i) {
    MotionPlan plan;
    plan.option = static_cast<int>(i);
    try {
      plan.goal = arm_ik(model, flange_target(options[i].hand_pose, flange_in_hand), current, p.ik).joints;
    } catch (const NoConvergence&) {
      continue;
    }
    plan.trajectory = stomp_refine(model, plan_linear(current, plan.goal, p.waypoints, p.dt), obstacles, p.stomp);
    plan.cost = motion_cost(plan.trajectory);
    evals.push_back({plan.option, plan.cost, options[i].q});
    plans.push_back(std::move(plan));
  }
  if (plans.empty()) throw NoFeasibleGrasp("arm IK failed for all " + std::to_string(options.size()) + " options");
  return plans[static_cast<std::size_t>(argmin_cost(evals))];
}

}  // namespace dexgrasp::motion
