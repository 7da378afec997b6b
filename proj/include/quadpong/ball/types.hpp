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

#include "quadpong/core/types.hpp"

namespace quadpong::ball {

/// Full ball state in the world frame: position, velocity, angular velocity.
struct BallState {
  Vec3 r{Vec3::Zero()};  // m
  Vec3 v{Vec3::Zero()};  // m/s
  Vec3 w{Vec3::Zero()};  // rad/s
  double t{0.0};         // s
};

/// Lumped aerodynamic coefficients: acceleration is
///   a = -c_drag*|v|*v + c_magnus*(w x v) + gravity
/// with gravity stored as the downward vector it contributes.
struct AeroParams {
  double c_drag{0.14};      // 1/m
  double c_magnus{5.6e-3};  // s
  Vec3 gravity{0.0, 0.0, -9.81};
};

/// Hollow-sphere ball: I = (2/3) m r^2.
struct BallPhysicalParams {
  double mass{2.7e-3};    // kg
  double radius{0.02};    // m
  double inertia{2.0 / 3.0 * 2.7e-3 * 0.02 * 0.02};  // kg m^2

  static BallPhysicalParams standard() { return BallPhysicalParams{}; }
};

/// One-sided rigid contact surface. The table is the special case of a
/// stationary surface with a +z normal; the paddle supplies its own
/// velocity and face normal at the moment of impact.
struct ContactSurface {
  Vec3 normal{0.0, 0.0, 1.0};    // unit, pointing from surface toward ball
  Vec3 point{Vec3::Zero()};      // any point on the surface, m
  Vec3 velocity{Vec3::Zero()};   // surface material velocity, m/s
  double restitution{0.93};
  double friction_mu{0.25};
};

/// Table geometry. World origin is the table center on the playing surface,
/// x along the long axis (robot on the -x side), z up.
struct Table {
  double half_length{1.37};
  double half_width{0.7625};
  double net_height{0.1525};
  double surface_z{0.0};
  double floor_z{-0.76};

  bool on_surface(double x, double y) const {
    return std::abs(x) <= half_length && std::abs(y) <= half_width;
  }
};

/// Vertical plane where the incoming ball is intercepted. The normal points
/// away from the robot, so an approaching ball has v . normal < 0 and the
/// signed distance decreases through zero at arrival.
struct StrikePlane {
  Vec3 normal{1.0, 0.0, 0.0};
  double offset{-1.6};  // n . r = offset on the plane

  double signed_dist(const Vec3& r) const { return normal.dot(r) - offset; }
};

inline ContactSurface table_surface(const Table& table = Table{}) {
  ContactSurface s;
  s.normal = Vec3(0.0, 0.0, 1.0);
  s.point = Vec3(0.0, 0.0, table.surface_z);
  s.restitution = 0.93;
  s.friction_mu = 0.25;
  return s;
}

}  // namespace quadpong::ball
