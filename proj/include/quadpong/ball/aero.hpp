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

#include "quadpong/ball/types.hpp"

namespace quadpong::ball {

/// Drag + Magnus + gravity acceleration for the given velocity and spin.
inline Vec3 aero_accel(const Vec3& v, const Vec3& w, const AeroParams& p) {
  return -p.c_drag * v.norm() * v + p.c_magnus * w.cross(v) + p.gravity;
}

inline Vec3 aero_accel(const BallState& s, const AeroParams& p) {
  return aero_accel(s.v, s.w, p);
}

/// Jacobian of aero_accel with respect to velocity (spin held fixed).
inline Mat3 aero_accel_dv(const Vec3& v, const Vec3& w, const AeroParams& p) {
  const double n = v.norm();
  Mat3 d = p.c_magnus * skew(w);
  if (n > 1e-12) {
    d -= p.c_drag * (n * Mat3::Identity() + v * v.transpose() / n);
  }
  return d;
}

/// Advances position and velocity by one RK4 step; spin is constant in
/// flight. Throws on non-positive dt.
BallState step(const BallState& s, double dt, const AeroParams& p);

}  // namespace quadpong::ball
