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

#include <vector>

#include "quadpong/ball/flight.hpp"
#include "quadpong/opt/sqp.hpp"

namespace quadpong::aim {

/// Desired paddle state at strike: position, velocity, face normal.
struct PaddleCommand {
  Vec3 p_des{Vec3::Zero()};
  Vec3 v_des{Vec3::Zero()};
  Vec3 n_des{Vec3::UnitX()};
};

struct AimRequest {
  ball::BallState ball_pre;  // predicted state at the strike plane
  Vec3 p_land{0.685, 0.0, 0.02};  // target point, z at ball radius
  Vec3 omega_plus{Vec3::Zero()};  // desired outgoing spin
  double t_land{0.45};
  int nodes{20};
};

enum class AimStatus { Converged, InfeasibleTarget, SqpFailure };

struct AimSolution {
  PaddleCommand command;
  MatX traj_r;  // 3 x N planned ball positions post contact
  MatX traj_v;  // 3 x N
  Vec3 omega_out{Vec3::Zero()};  // spin from the unit-normal contact model
  double landing_error{0.0};     // from independent fine simulation, m
  Vec3 sim_landing{Vec3::Zero()};
  bool net_cleared{false};
  int iterations{0};
  std::vector<double> violation_trace;
  double final_violation{0.0};
  AimStatus status{AimStatus::Converged};
};

struct AimSettings {
  int sqp_iters{4};
  double w_v{1.0};                 // paddle-speed cost weight
  double converged_tol{1e-3};
  bool net_constraint{true};
  double net_margin{0.02};
  double paddle_restitution{0.88};
  double paddle_mu{0.6};
  opt::QpSettings qp{};
};

/// Strike-aiming solver: finds (v_des, n_des) and the post-contact ball
/// trajectory such that the contact map and discrete flight dynamics land
/// the ball at p_land after t_land with spin omega_plus. Runs a fixed SQP
/// budget and verifies the returned command by fine forward simulation.
class AimSolver {
 public:
  AimSolver(const ball::AeroParams& aero, const ball::FlightEnv& env,
            const AimSettings& settings = {})
      : aero_(aero), env_(env), settings_(settings) {}

  AimSolution solve(const AimRequest& request) const;

  const AimSettings& settings() const { return settings_; }

 private:
  ball::AeroParams aero_;
  ball::FlightEnv env_;
  AimSettings settings_;
};

struct SpinPolicy {
  double gain{1.0};
  double clamp{200.0};  // rad/s
};

/// Mirror heuristic: return the received spin (scaled and clamped).
Vec3 choose_return_spin(const Vec3& omega_minus, const SpinPolicy& policy = {});

struct FlightTimePolicy {
  double nominal_speed{6.0};  // m/s
  double t_min{0.3};
  double t_max{1.2};
};

/// Distance over nominal return speed, clamped.
double choose_flight_time(const ball::BallState& ball_pre, const Vec3& p_land,
                          const FlightTimePolicy& policy = {});

}  // namespace quadpong::aim
