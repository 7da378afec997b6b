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

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace quadpong {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using VecX = Eigen::VectorXd;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using MatX = Eigen::MatrixXd;
using Quat = Eigen::Quaterniond;

inline Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

/// Rotation about the world z-axis.
inline Mat3 rot_z(double angle) {
  return Eigen::AngleAxisd(angle, Vec3::UnitZ()).toRotationMatrix();
}

/// Quaternion exponential of a rotation vector.
inline Quat quat_exp(const Vec3& phi) {
  const double angle = phi.norm();
  if (angle < 1e-12) {
    Quat q(1.0, 0.5 * phi.x(), 0.5 * phi.y(), 0.5 * phi.z());
    q.normalize();
    return q;
  }
  const Vec3 axis = phi / angle;
  return Quat(Eigen::AngleAxisd(angle, axis));
}

/// Rotation-vector logarithm of a unit quaternion.
inline Vec3 quat_log(const Quat& q_in) {
  Quat q = q_in;
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  const Vec3 im(q.x(), q.y(), q.z());
  const double s = im.norm();
  if (s < 1e-12) return 2.0 * im;
  const double angle = 2.0 * std::atan2(s, q.w());
  return angle * (im / s);
}

/// Right Jacobian of exp for world-frame (left) rotation-vector coordinates:
/// omega_world = dexp_world(phi) * phi_dot for q(t) = exp(phi(t)) * q_ref.
inline Mat3 dexp_world(const Vec3& phi) {
  const double a = phi.norm();
  const Mat3 S = skew(phi);
  if (a < 1e-8) return Mat3::Identity() + 0.5 * S + S * S / 6.0;
  const double a2 = a * a;
  return Mat3::Identity() + (1.0 - std::cos(a)) / a2 * S +
         (a - std::sin(a)) / (a2 * a) * S * S;
}

}  // namespace quadpong
