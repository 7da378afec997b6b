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

#include <cstdint>
#include <string>
#include <vector>

#include "quadpong/core/types.hpp"

namespace quadpong::robot {

struct Link {
  std::string name;
  double mass{0.0};
  Vec3 com{Vec3::Zero()};   // in link frame
  Mat3 inertia{Mat3::Zero()};  // about com, in link frame
  int parent_joint{-1};     // -1 for the floating base
};

/// Revolute joint. The joint frame is fixed in the parent link at
/// (origin_xyz, origin_rot); the child link frame coincides with the joint
/// frame rotated by the joint angle about `axis`.
struct Joint {
  std::string name;
  int parent_link{-1};
  int child_link{-1};
  Vec3 origin_xyz{Vec3::Zero()};
  Mat3 origin_rot{Mat3::Identity()};
  Vec3 axis{Vec3::UnitZ()};
  double q_min{-3.14}, q_max{3.14};
  double effort{30.0};  // torque limit, Nm
  double rest{0.0};
  bool actuated{true};
};

struct Frame {
  std::string name;
  int link{-1};
  Vec3 offset{Vec3::Zero()};  // point in link frame
  bool is_foot{false};
};

/// Floating-base kinematic/dynamic tree: quadruped base + 4x3 leg joints +
/// 6 arm joints + paddle frames. Generalized position is
/// [base position (3), base quaternion (4), joint angles (nj)];
/// generalized velocity is [base linear (3, world), base angular (3, world),
/// joint rates (nj)].
class RobotModel {
 public:
  std::vector<Link> links;     // links[0] is the floating base
  std::vector<Joint> joints;   // topologically ordered
  std::vector<Frame> frames;
  std::string name{"robot"};

  int num_joints() const { return static_cast<int>(joints.size()); }
  int nv() const { return 6 + num_joints(); }
  int nq() const { return 7 + num_joints(); }
  int num_actuated() const;

  int link_index(const std::string& name) const;   // -1 if missing
  int frame_index(const std::string& name) const;  // throws if missing
  const std::vector<int>& foot_frames() const { return foot_frames_; }
  const std::vector<int>& chain(int link) const { return chains_[link]; }

  VecX rest_joints() const;
  VecX joint_lower() const;
  VecX joint_upper() const;
  VecX effort_limits() const;

  /// Velocity-space selection matrix B (nv x num_actuated).
  MatX selection_matrix() const;

  /// Validates tree structure and inertia matrices; builds chain caches.
  /// Throws std::runtime_error with a description on failure.
  void finalize();

  std::string serialize() const;
  uint64_t hash() const;

  static RobotModel parse(const std::string& text);
  static RobotModel load(const std::string& path);
  void save(const std::string& path) const;

 private:
  std::vector<std::vector<int>> chains_;  // per link: joint indices root->link
  std::vector<int> foot_frames_;
};

/// Default 24-DoF quadruped-with-arm model (declared plausible dimensions).
RobotModel make_default_model();

}  // namespace quadpong::robot
