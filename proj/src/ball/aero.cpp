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

#include "quadpong/ball/aero.hpp"

#include <stdexcept>

namespace quadpong::ball {

BallState step(const BallState& s, double dt, const AeroParams& p) {
  if (!(dt > 0.0)) throw std::invalid_argument("ball::step: dt must be > 0");

  const Vec3 k1v = aero_accel(s.v, s.w, p);
  const Vec3 k1r = s.v;

  const Vec3 v2 = s.v + 0.5 * dt * k1v;
  const Vec3 k2v = aero_accel(v2, s.w, p);
  const Vec3 k2r = v2;

  const Vec3 v3 = s.v + 0.5 * dt * k2v;
  const Vec3 k3v = aero_accel(v3, s.w, p);
  const Vec3 k3r = v3;

  const Vec3 v4 = s.v + dt * k3v;
  const Vec3 k4v = aero_accel(v4, s.w, p);
  const Vec3 k4r = v4;

  BallState out = s;
  out.r = s.r + dt / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
  out.v = s.v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  out.t = s.t + dt;
  return out;
}

}  // namespace quadpong::ball
