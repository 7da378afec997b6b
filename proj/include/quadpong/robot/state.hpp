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
#include "quadpong/robot/model.hpp"

namespace quadpong::robot {

struct RobotState {
  Vec3 base_pos{Vec3::Zero()};
  Quat base_quat{Quat::Identity()};
  VecX q_joints;
  Vec3 base_lin_vel{Vec3::Zero()};
  Vec3 base_ang_vel{Vec3::Zero()};  // world frame
  VecX v_joints;

  static RobotState zero(const RobotModel& m) {
    RobotState s;
    s.q_joints = VecX::Zero(m.num_joints());
    s.v_joints = VecX::Zero(m.num_joints());
    return s;
  }

  VecX velocity(const RobotModel& m) const {
    VecX v(m.nv());
    v.head<3>() = base_lin_vel;
    v.segment<3>(3) = base_ang_vel;
    v.tail(m.num_joints()) = v_joints;
    return v;
  }

  void set_velocity(const RobotModel& m, const VecX& v) {
    base_lin_vel = v.head<3>();
    base_ang_vel = v.segment<3>(3);
    v_joints = v.tail(m.num_joints());
  }
};

/// Tangent parameterization used by the planners: 24 coordinates
/// [base position (3); rotation vector relative to a reference quaternion (3);
/// joint angles (nj)]. The reference is the base orientation at plan epoch.
inline VecX to_tangent(const RobotModel& m, const RobotState& s, const Quat& ref) {
  VecX x(m.nv());
  x.head<3>() = s.base_pos;
  x.segment<3>(3) = quat_log(s.base_quat * ref.conjugate());
  x.tail(m.num_joints()) = s.q_joints;
  return x;
}

/// Tangent rates -> generalized velocity (angular part through dexp).
inline VecX tangent_rate_to_velocity(const VecX& x, const VecX& xdot) {
  VecX v = xdot;
  v.segment<3>(3) = dexp_world(x.segment<3>(3)) * xdot.segment<3>(3);
  return v;
}

inline RobotState from_tangent(const RobotModel& m, const VecX& x,
                               const VecX& xdot, const Quat& ref) {
  RobotState s;
  s.base_pos = x.head<3>();
  s.base_quat = quat_exp(x.segment<3>(3)) * ref;
  s.base_quat.normalize();
  s.q_joints = x.tail(m.num_joints());
  const VecX v = tangent_rate_to_velocity(x, xdot);
  s.base_lin_vel = v.head<3>();
  s.base_ang_vel = v.segment<3>(3);
  s.v_joints = v.tail(m.num_joints());
  return s;
}

}  // namespace quadpong::robot
