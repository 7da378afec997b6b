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

#include "quadpong/ball/contact.hpp"

#include <stdexcept>

namespace quadpong::ball {

BallState impulse_contact(const BallState& s, const ContactSurface& surf,
                          const BallPhysicalParams& ball) {
  const Vec3 n = surf.normal;
  const double approach = (s.v - surf.velocity).dot(n);
  if (!(approach < 0.0)) {
    throw std::invalid_argument(
        "impulse_contact: ball is not approaching the surface");
  }

  const double m = ball.mass;
  const double inertia = ball.inertia;
  const Vec3 lever = -ball.radius * n;  // center -> contact point

  // Relative velocity of the ball material point at contact.
  const Vec3 u = s.v + s.w.cross(lever) - surf.velocity;
  const double u_n = u.dot(n);
  const Vec3 slip = u - u_n * n;

  const double jn = -(1.0 + surf.restitution) * m * u_n;

  // Tangential impulse: stick if it fits in the friction cone, else slide.
  // For a sphere the stick impulse that cancels slip is
  //   j_t = -slip / (1/m + r^2/I).
  const double k = 1.0 / m + ball.radius * ball.radius / inertia;
  Vec3 jt = -slip / k;
  const double jt_max = surf.friction_mu * jn;
  if (jt.norm() > jt_max) {
    const double slip_norm = slip.norm();
    jt = (slip_norm > 1e-14) ? Vec3(-jt_max * slip / slip_norm) : Vec3::Zero();
  }

  BallState out = s;
  out.v = s.v + (jn * n + jt) / m;
  out.w = s.w + lever.cross(jt) / inertia;
  return out;
}

}  // namespace quadpong::ball
