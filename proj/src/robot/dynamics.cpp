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

#include "quadpong/robot/dynamics.hpp"

#include <Eigen/LU>
#include <stdexcept>

namespace quadpong::robot {

namespace {

// Per-link com/angular accelerations with qdd = 0 and no gravity
// (velocity-product terms only).
struct BiasAccel {
  std::vector<Vec3> alpha;     // angular acceleration
  std::vector<Vec3> a_origin;  // linear acceleration of the link origin
};

BiasAccel bias_accelerations(const RobotModel& m, const RobotState& s,
                             const KinematicsCache& c) {
  const size_t nl = m.links.size();
  BiasAccel b;
  b.alpha.assign(nl, Vec3::Zero());
  b.a_origin.assign(nl, Vec3::Zero());
  for (size_t l = 1; l < nl; ++l) {
    const int jidx = m.links[l].parent_joint;
    const int parent = m.joints[jidx].parent_link;
    const Vec3 rel = c.p[l] - c.p[parent];
    b.a_origin[l] = b.a_origin[parent] + b.alpha[parent].cross(rel) +
                    c.omega[parent].cross(c.omega[parent].cross(rel));
    b.alpha[l] = b.alpha[parent] +
                 c.omega[parent].cross(c.joint_axis[l]) * s.v_joints[jidx];
  }
  return b;
}

Vec3 point_accel_bias(const KinematicsCache& c, const BiasAccel& b, int link,
                      const Vec3& point) {
  const Vec3 rel = point - c.p[link];
  return b.a_origin[link] + b.alpha[link].cross(rel) +
         c.omega[link].cross(c.omega[link].cross(rel));
}

}  // namespace

DynamicsTerms dynamics_terms(const RobotModel& m, const RobotState& s,
                             const DynamicsOptions& opts) {
  const int nv = m.nv();
  const size_t nl = m.links.size();

  KinematicsCache c;
  forward_kinematics(m, s, c);
  forward_velocity(m, s, c);
  const BiasAccel b = bias_accelerations(m, s, c);

  DynamicsTerms out;
  out.M = MatX::Zero(nv, nv);
  out.bias = VecX::Zero(nv);
  out.tau_g = VecX::Zero(nv);

  MatX Jv(3, nv), Jw(3, nv);
  for (size_t l = 0; l < nl; ++l) {
    const Link& link = m.links[l];
    point_jacobian(m, c, static_cast<int>(l), c.com[l], Jv);
    angular_jacobian(m, c, static_cast<int>(l), Jw);

    const Mat3 I_w = c.R[l] * link.inertia * c.R[l].transpose();
    out.M.noalias() += link.mass * Jv.transpose() * Jv;
    out.M.noalias() += Jw.transpose() * I_w * Jw;

    const Vec3 a_com = point_accel_bias(c, b, static_cast<int>(l), c.com[l]);
    const Vec3 gyro = I_w * b.alpha[l] + c.omega[l].cross(I_w * c.omega[l]);
    out.bias.noalias() += link.mass * Jv.transpose() * a_com;
    out.bias.noalias() += Jw.transpose() * gyro;

    out.tau_g.noalias() += Jv.transpose() * (link.mass * opts.gravity);
  }

  if (opts.want_feet) {
    const auto& feet = m.foot_frames();
    out.J_feet = MatX::Zero(3 * static_cast<int>(feet.size()), nv);
    out.jdotv_feet = VecX::Zero(3 * static_cast<int>(feet.size()));
    for (size_t k = 0; k < feet.size(); ++k) {
      const Frame& f = m.frames[feet[k]];
      const Vec3 pos = c.frame_position(m, feet[k]);
      point_jacobian(m, c, f.link, pos, out.J_feet.middleRows<3>(3 * k));
      out.jdotv_feet.segment<3>(3 * k) = point_accel_bias(c, b, f.link, pos);
    }
  }
  if (opts.want_paddle) {
    out.J_paddle = frame_jacobian(m, c, m.frame_index("paddle_center"));
  }
  return out;
}

ConstrainedAccel constrained_forward_dynamics(
    const RobotModel& m, const RobotState& s, const VecX& u,
    const std::vector<Vec3>& pin_targets, const BaumgarteGains& gains,
    const DynamicsOptions& opts) {
  const int nv = m.nv();
  DynamicsOptions dopts = opts;
  dopts.want_feet = true;
  const DynamicsTerms terms = dynamics_terms(m, s, dopts);
  const auto& feet = m.foot_frames();
  if (pin_targets.size() != feet.size()) {
    throw std::invalid_argument("constrained_forward_dynamics: need one pin target per foot");
  }
  const int nc = 3 * static_cast<int>(feet.size());

  KinematicsCache c;
  forward_kinematics(m, s, c);
  forward_velocity(m, s, c);

  const VecX v = s.velocity(m);
  VecX corr(nc);
  const VecX foot_vel = terms.J_feet * v;
  for (size_t k = 0; k < feet.size(); ++k) {
    const Vec3 pos = c.frame_position(m, feet[k]);
    const Vec3 err = pos - pin_targets[k];
    corr.segment<3>(3 * k) =
        2.0 * gains.zeta * gains.omega * foot_vel.segment<3>(3 * k) +
        gains.omega * gains.omega * err;
  }

  MatX kkt = MatX::Zero(nv + nc, nv + nc);
  kkt.topLeftCorner(nv, nv) = terms.M;
  kkt.topRightCorner(nv, nc) = -terms.J_feet.transpose();
  kkt.bottomLeftCorner(nc, nv) = terms.J_feet;
  VecX rhs(nv + nc);
  rhs.head(nv) = m.selection_matrix() * u + terms.tau_g - terms.bias;
  rhs.tail(nc) = -terms.jdotv_feet - corr;

  Eigen::FullPivLU<MatX> lu(kkt);
  const double rcond = lu.rcond();
  if (!lu.isInvertible() || rcond < 1e-14) {
    throw std::runtime_error(
        "constrained_forward_dynamics: singular KKT system, rcond = " +
        std::to_string(rcond));
  }
  const VecX sol = lu.solve(rhs);

  ConstrainedAccel out;
  out.qdd = sol.head(nv);
  out.lambda = sol.tail(nc);
  out.kkt_rcond = rcond;
  return out;
}

RobotState integrate(const RobotModel& m, const RobotState& s, const VecX& qdd,
                     double dt) {
  RobotState out = s;
  VecX v = s.velocity(m);
  v += qdd * dt;
  out.set_velocity(m, v);
  out.base_pos += out.base_lin_vel * dt;
  out.base_quat = quat_exp(out.base_ang_vel * dt) * out.base_quat;
  out.base_quat.normalize();
  out.q_joints += out.v_joints * dt;
  return out;
}

PlantStepResult plant_step(const RobotModel& m, const RobotState& s,
                           const VecX& u, const std::vector<Vec3>& pin_targets,
                           const BaumgarteGains& gains, double dt) {
  const ConstrainedAccel k1 =
      constrained_forward_dynamics(m, s, u, pin_targets, gains);
  const RobotState mid = integrate(m, s, k1.qdd, 0.5 * dt);
  ConstrainedAccel k2 =
      constrained_forward_dynamics(m, mid, u, pin_targets, gains);

  RobotState next = s;
  VecX v = s.velocity(m);
  v += k2.qdd * dt;
  next.set_velocity(m, v);
  next.base_pos = s.base_pos + mid.base_lin_vel * dt;
  next.base_quat = quat_exp(mid.base_ang_vel * dt) * s.base_quat;
  next.base_quat.normalize();
  next.q_joints = s.q_joints + mid.v_joints * dt;
  return {next, std::move(k2)};
}

StaticEquilibrium static_equilibrium(const RobotModel& m, const RobotState& s,
                                     const DynamicsOptions& opts) {
  DynamicsOptions dopts = opts;
  dopts.want_feet = true;
  const DynamicsTerms terms = dynamics_terms(m, s, dopts);
  const int nv = m.nv();
  const int na = m.num_actuated();
  const int nc = static_cast<int>(terms.J_feet.rows());

  // Solve [B J'] [u; lambda] = bias - tau_g in the least-squares sense.
  MatX A(nv, na + nc);
  A.leftCols(na) = m.selection_matrix();
  A.rightCols(nc) = terms.J_feet.transpose();
  const VecX rhs = terms.bias - terms.tau_g;
  const VecX sol = A.colPivHouseholderQr().solve(rhs);

  StaticEquilibrium eq;
  eq.u = sol.head(na);
  eq.lambda = sol.tail(nc);
  eq.residual = (A * sol - rhs).norm();
  return eq;
}

}  // namespace quadpong::robot
