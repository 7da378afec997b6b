// Copyright 2026 Quadpong Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "quadpong/robot/kinematics.hpp"

namespace quadpong::robot {

/// Equations of motion in generalized coordinates:
///   M qdd + bias = tau_g + B u + J' lambda.
struct DynamicsTerms {
  MatX M;            // nv x nv mass matrix
  VecX bias;         // Coriolis/centrifugal generalized force
  VecX tau_g;        // generalized force of gravity
  MatX J_feet;       // 12 x nv stacked foot point Jacobians
  VecX jdotv_feet;   // 12, foot point acceleration at qdd = 0
  MatX J_paddle;     // 3 x nv paddle-center Jacobian
};

struct DynamicsOptions {
  Vec3 gravity{0.0, 0.0, -9.81};
  bool want_feet{true};
  bool want_paddle{true};
};

/// Mass matrix, bias and gravity forces, and task Jacobians at (q, v).
/// The cache must carry velocities when bias terms are requested.
DynamicsTerms dynamics_terms(const RobotModel& m, const RobotState& s,
                             const DynamicsOptions& opts = {});

struct ConstrainedAccel {
  VecX qdd;      // nv
  VecX lambda;   // 3 per pinned foot
  double kkt_rcond{0.0};
};

struct BaumgarteGains {
  double omega{50.0};
  double zeta{1.0};
};

/// Forward dynamics with the listed feet pinned at target points:
/// solves [M -J'; J 0][qdd; lambda] = [B u + tau_g - bias; -Jdot v - corr]
/// where corr is the Baumgarte feedback on foot position/velocity error.
/// Throws on a singular KKT system, reporting its conditioning.
ConstrainedAccel constrained_forward_dynamics(
    const RobotModel& m, const RobotState& s, const VecX& u,
    const std::vector<Vec3>& pin_targets, const BaumgarteGains& gains = {},
    const DynamicsOptions& opts = {});

/// Semi-implicit Euler step of the floating-base state.
RobotState integrate(const RobotModel& m, const RobotState& s, const VecX& qdd,
                     double dt);

struct PlantStepResult {
  RobotState state;
  ConstrainedAccel accel;  // midpoint-stage accelerations and foot forces
};

/// Midpoint (RK2) step of the pinned-feet plant under constant torques.
/// Keeps foot drift far below the Baumgarte authority at dt = 1e-3.
PlantStepResult plant_step(const RobotModel& m, const RobotState& s,
                           const VecX& u, const std::vector<Vec3>& pin_targets,
                           const BaumgarteGains& gains, double dt);

/// Gravity-compensating actuator torques and the matching static foot forces
/// for a standing pose (used to initialize episodes in equilibrium).
struct StaticEquilibrium {
  VecX u;
  VecX lambda;
  double residual{0.0};  // norm of the unactuated-row mismatch
};
StaticEquilibrium static_equilibrium(const RobotModel& m, const RobotState& s,
                                     const DynamicsOptions& opts = {});

}  // namespace quadpong::robot
