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

#include "quadpong/robot/model.hpp"
#include "quadpong/robot/state.hpp"

namespace quadpong::robot {

/// World-frame kinematic quantities for every link, filled by
/// forward_kinematics (poses) and forward_velocity (twists).
struct KinematicsCache {
  std::vector<Mat3> R;              // link orientation
  std::vector<Vec3> p;              // link frame origin
  std::vector<Vec3> com;            // link com
  std::vector<Vec3> joint_axis;     // world axis of the link's parent joint
  std::vector<Vec3> joint_origin;   // world position of the parent joint
  std::vector<Vec3> omega;          // link angular velocity
  std::vector<Vec3> v_origin;       // linear velocity of the link frame origin
  bool has_velocity{false};

  Vec3 frame_position(const RobotModel& m, int frame) const {
    const Frame& f = m.frames[frame];
    return p[f.link] + R[f.link] * f.offset;
  }

  Vec3 point_velocity(const RobotModel& m, int link, const Vec3& world_point) const {
    (void)m;
    return v_origin[link] + omega[link].cross(world_point - p[link]);
  }

  Vec3 frame_velocity(const RobotModel& m, int frame) const {
    const Frame& f = m.frames[frame];
    return point_velocity(m, f.link, frame_position(m, frame));
  }
};

void forward_kinematics(const RobotModel& m, const RobotState& s, KinematicsCache& cache);
void forward_velocity(const RobotModel& m, const RobotState& s, KinematicsCache& cache);

inline KinematicsCache forward_kinematics(const RobotModel& m, const RobotState& s) {
  KinematicsCache cache;
  forward_kinematics(m, s, cache);
  return cache;
}

/// World-frame point Jacobian (3 x nv) of a point attached to `link`,
/// mapping generalized velocity to the point's linear velocity.
using JacobianRef = Eigen::Ref<MatX, 0, Eigen::OuterStride<>>;

void point_jacobian(const RobotModel& m, const KinematicsCache& cache, int link,
                    const Vec3& world_point, JacobianRef J);

/// Angular Jacobian (3 x nv) of a link.
void angular_jacobian(const RobotModel& m, const KinematicsCache& cache, int link,
                      JacobianRef J);

MatX frame_jacobian(const RobotModel& m, const KinematicsCache& cache, int frame);

/// Paddle face normal: unit vector from paddle_center to paddle_normal_tip.
Vec3 paddle_normal(const RobotModel& m, const KinematicsCache& cache);

}  // namespace quadpong::robot
