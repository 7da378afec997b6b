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

#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "quadpong/ball/aero.hpp"
#include "quadpong/ball/contact.hpp"
#include "quadpong/ball/types.hpp"

namespace quadpong::ball {

struct FlightEnv {
  Table table{};
  ContactSurface table_contact{table_surface()};
  BallPhysicalParams ball{};
};

struct FlightOptions {
  double dt{1e-3};
  double max_time{3.0};
  double event_tol{1e-5};  // bisection refinement of event times, s
  bool record{false};
};

struct BounceEvent {
  BallState pre;
  BallState post;
};

struct FlightLog {
  std::vector<BallState> samples;
  std::vector<BounceEvent> bounces;
};

enum class NoArrivalReason {
  TimeBudget,
  MovingAway,
  DoubleBounce,
  FloorHit,
  Stopped,
};

struct PlaneArrival {
  BallState state;            // at the plane crossing
  double time_of_flight{0.0}; // relative to the start state's clock
  int bounce_count{0};
};

/// Integrates flight with table-bounce events until the ball crosses the
/// strike plane while moving toward the robot. A second bounce on the
/// robot half, a floor hit, a stopped ball, or an exhausted time budget
/// yield NoArrival.
std::optional<PlaneArrival> integrate_to_plane(
    const BallState& start, const StrikePlane& plane, const AeroParams& aero,
    const FlightEnv& env, const FlightOptions& opts = {},
    FlightLog* log = nullptr, NoArrivalReason* reason = nullptr);

enum class ReturnEventKind { TableContact, NetHit, FloorHit, Timeout };

struct ReturnFlight {
  ReturnEventKind kind{ReturnEventKind::Timeout};
  BallState state;        // at the terminal event
  bool net_crossed{false};
};

/// Simulates a struck ball until its first table contact, treating the net
/// as a vertical kill-plane. Used to score returns and to check aiming
/// solutions against the fine integrator.
ReturnFlight simulate_return(const BallState& start, const AeroParams& aero,
                             const FlightEnv& env, const FlightOptions& opts = {},
                             FlightLog* log = nullptr);

/// CSV trajectory export: header t,x,y,z,vx,vy,vz,wx,wy,wz, SI units.
void write_trajectory_csv(std::ostream& os, std::span<const BallState> samples);

}  // namespace quadpong::ball
