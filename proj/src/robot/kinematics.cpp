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

#include "quadpong/robot/kinematics.hpp"

namespace quadpong::robot {

void forward_kinematics(const RobotModel& m, const RobotState& s,
                        KinematicsCache& cache) {
  const size_t nl = m.links.size();
  cache.R.resize(nl);
  cache.p.resize(nl);
  cache.com.resize(nl);
  cache.joint_axis.resize(nl);
  cache.joint_origin.resize(nl);
  cache.has_velocity = false;

  cache.R[0] = s.base_quat.toRotationMatrix();
  cache.p[0] = s.base_pos;
  cache.com[0] = cache.p[0] + cache.R[0] * m.links[0].com;
  cache.joint_axis[0] = Vec3::Zero();
  cache.joint_origin[0] = s.base_pos;

  for (size_t l = 1; l < nl; ++l) {
    const Joint& j = m.joints[m.links[l].parent_joint];
    const int parent = j.parent_link;
    const Mat3 R_joint = cache.R[parent] * j.origin_rot;
    const Vec3 origin = cache.p[parent] + cache.R[parent] * j.origin_xyz;
    const double q = s.q_joints[m.links[l].parent_joint];
    cache.joint_axis[l] = R_joint * j.axis;
    cache.joint_origin[l] = origin;
    cache.R[l] = R_joint * Eigen::AngleAxisd(q, j.axis).toRotationMatrix();
    cache.p[l] = origin;
    cache.com[l] = origin + cache.R[l] * m.links[l].com;
  }
}

void forward_velocity(const RobotModel& m, const RobotState& s,
                      KinematicsCache& cache) {
  const size_t nl = m.links.size();
  cache.omega.resize(nl);
  cache.v_origin.resize(nl);
  cache.omega[0] = s.base_ang_vel;
  cache.v_origin[0] = s.base_lin_vel;
  for (size_t l = 1; l < nl; ++l) {
    const int jidx = m.links[l].parent_joint;
    const int parent = m.joints[jidx].parent_link;
    cache.v_origin[l] = cache.v_origin[parent] +
                        cache.omega[parent].cross(cache.p[l] - cache.p[parent]);
    cache.omega[l] = cache.omega[parent] + cache.joint_axis[l] * s.v_joints[jidx];
  }
  cache.has_velocity = true;
}

void point_jacobian(const RobotModel& m, const KinematicsCache& cache, int link,
                    const Vec3& world_point, JacobianRef J) {
  J.setZero();
  J.block<3, 3>(0, 0).setIdentity();
  const Vec3 rel_base = world_point - cache.p[0];
  J.block<3, 3>(0, 3) = -skew(rel_base);
  for (const int jidx : m.chain(link)) {
    const int child = m.joints[jidx].child_link;
    J.col(6 + jidx) =
        cache.joint_axis[child].cross(world_point - cache.joint_origin[child]);
  }
}

void angular_jacobian(const RobotModel& m, const KinematicsCache& cache, int link,
                      JacobianRef J) {
  J.setZero();
  J.block<3, 3>(0, 3).setIdentity();
  for (const int jidx : m.chain(link)) {
    J.col(6 + jidx) = cache.joint_axis[m.joints[jidx].child_link];
  }
}

MatX frame_jacobian(const RobotModel& m, const KinematicsCache& cache, int frame) {
  MatX J(3, m.nv());
  const Frame& f = m.frames[frame];
  point_jacobian(m, cache, f.link, cache.frame_position(m, frame), J);
  return J;
}

Vec3 paddle_normal(const RobotModel& m, const KinematicsCache& cache) {
  const Vec3 c = cache.frame_position(m, m.frame_index("paddle_center"));
  const Vec3 tip = cache.frame_position(m, m.frame_index("paddle_normal_tip"));
  return (tip - c).normalized();
}

}  // namespace quadpong::robot
