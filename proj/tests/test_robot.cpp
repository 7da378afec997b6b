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

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "quadpong/core/rng.hpp"
#include "quadpong/robot/dynamics.hpp"

using namespace quadpong;
using namespace quadpong::robot;

namespace {

RobotState random_state(const RobotModel& m, Rng& rng, double vel_scale = 1.0) {
  RobotState s = RobotState::zero(m);
  s.base_pos = rng.normal3(0.5);
  s.base_quat = Quat(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  if (s.base_quat.norm() < 1e-6) s.base_quat = Quat::Identity();
  s.base_quat.normalize();
  for (int j = 0; j < m.num_joints(); ++j) {
    s.q_joints[j] = rng.uniform(m.joints[j].q_min, m.joints[j].q_max);
  }
  s.base_lin_vel = rng.normal3(vel_scale);
  s.base_ang_vel = rng.normal3(vel_scale);
  s.v_joints = VecX::NullaryExpr(m.num_joints(),
                                 [&](int) { return rng.normal(0.0, vel_scale); });
  return s;
}

// Applies a velocity-space perturbation eps*e_k to the configuration.
RobotState perturb(const RobotModel& m, const RobotState& s, int k, double eps) {
  RobotState out = s;
  if (k < 3) {
    out.base_pos[k] += eps;
  } else if (k < 6) {
    Vec3 phi = Vec3::Zero();
    phi[k - 3] = eps;
    out.base_quat = quat_exp(phi) * s.base_quat;
  } else {
    out.q_joints[k - 6] += eps;
  }
  return out;
}

double total_energy(const RobotModel& m, const RobotState& s, const Vec3& gravity) {
  const DynamicsOptions opts;
  DynamicsTerms t = dynamics_terms(m, s, {gravity, false, false});
  (void)opts;
  const VecX v = s.velocity(m);
  double e = 0.5 * v.dot(t.M * v);
  KinematicsCache c;
  forward_kinematics(m, s, c);
  for (size_t l = 0; l < m.links.size(); ++l) {
    e -= m.links[l].mass * gravity.dot(c.com[l]);
  }
  return e;
}

}  // namespace

TEST_CASE("default model: coordinate counts and actuation") {
  const RobotModel m = make_default_model();
  CHECK(m.nv() == 24);
  CHECK(m.nq() == 25);
  CHECK(m.num_joints() == 18);
  CHECK(m.num_actuated() == 18);
  CHECK(m.foot_frames().size() == 4);
  double total_mass = 0.0;
  for (const auto& l : m.links) total_mass += l.mass;
  CHECK(total_mass == doctest::Approx(45.0).epsilon(0.02));
}

TEST_CASE("model parse: self-parented link is rejected") {
  const std::string text =
      "robotfile 1\n"
      "name broken\n"
      "link base mass 1 com 0 0 0 inertia 1 1 1 0 0 0\n"
      "link a mass 1 com 0 0 0 inertia 1 1 1 0 0 0\n"
      "joint j parent a child a xyz 0 0 0 rpy 0 0 0 axis 0 0 1 range -1 1 "
      "effort 10 rest 0\n";
  CHECK_THROWS_WITH_AS(RobotModel::parse(text),
                       doctest::Contains("self-loop"), std::runtime_error);
}

TEST_CASE("model parse: non-SPD inertia is rejected") {
  const std::string text =
      "robotfile 1\n"
      "link base mass 1 com 0 0 0 inertia 1 1 -1 0 0 0\n";
  CHECK_THROWS_WITH_AS(RobotModel::parse(text), doctest::Contains("SPD"),
                       std::runtime_error);
}

TEST_CASE("model parse: error carries the line number") {
  const std::string text = "robotfile 1\nlink base mass x com 0 0 0 inertia 1 1 1 0 0 0\n";
  CHECK_THROWS_WITH_AS(RobotModel::parse(text), doctest::Contains("line 2"),
                       std::runtime_error);
}

TEST_CASE("model serialization round-trip preserves the hash") {
  const RobotModel m = make_default_model();
  const RobotModel m2 = RobotModel::parse(m.serialize());
  CHECK(m.hash() == m2.hash());
  const RobotModel m3 = RobotModel::parse(m2.serialize());
  CHECK(m2.hash() == m3.hash());
}

TEST_CASE("forward kinematics: zero configuration hits declared offsets") {
  const RobotModel m = make_default_model();
  RobotState s = RobotState::zero(m);
  KinematicsCache c;
  forward_kinematics(m, s, c);
  // Front-left foot at zero config: legs point straight down.
  const Vec3 foot = c.frame_position(m, m.frame_index("foot_fl"));
  CHECK(foot.x() == doctest::Approx(0.32));
  CHECK(foot.y() == doctest::Approx(0.28));  // 0.17 + 0.11
  CHECK(foot.z() == doctest::Approx(-0.70));
  // Paddle center: straight arm along +x from the mount.
  const Vec3 paddle = c.frame_position(m, m.frame_index("paddle_center"));
  CHECK(paddle.x() == doctest::Approx(0.29 + 0.34 + 0.33 + 0.08 + 0.06 + 0.18));
  CHECK(paddle.z() == doctest::Approx(0.18));
}

TEST_CASE("forward kinematics: base rotation rotates all frames rigidly") {
  const RobotModel m = make_default_model();
  Rng rng(3);
  RobotState s = random_state(m, rng);
  s.base_pos = Vec3(0.2, -0.1, 0.4);
  KinematicsCache c0;
  forward_kinematics(m, s, c0);

  const Quat R = quat_exp(Vec3(0.3, -0.2, 0.9));
  RobotState s2 = s;
  s2.base_quat = R * s.base_quat;
  KinematicsCache c1;
  forward_kinematics(m, s2, c1);

  for (size_t f = 0; f < m.frames.size(); ++f) {
    const Vec3 rel = c0.frame_position(m, static_cast<int>(f)) - s.base_pos;
    const Vec3 expect = s.base_pos + R * rel;
    CHECK((c1.frame_position(m, static_cast<int>(f)) - expect).norm() < 1e-12);
  }
}

TEST_CASE("forward kinematics: joint perturbation moves only descendants") {
  const RobotModel m = make_default_model();
  Rng rng(4);
  const RobotState s = random_state(m, rng);
  KinematicsCache c0;
  forward_kinematics(m, s, c0);

  const int jidx = 3;  // fr_hx, front-right hip abduction
  const RobotState sp = perturb(m, s, 6 + jidx, 0.2);
  KinematicsCache c1;
  forward_kinematics(m, sp, c1);

  for (size_t f = 0; f < m.frames.size(); ++f) {
    const int link = m.frames[f].link;
    const auto& chain = m.chain(link);
    const bool descendant =
        std::find(chain.begin(), chain.end(), jidx) != chain.end();
    const double moved = (c1.frame_position(m, static_cast<int>(f)) -
                          c0.frame_position(m, static_cast<int>(f)))
                             .norm();
    if (descendant) {
      CHECK(moved > 1e-4);
    } else {
      CHECK(moved < 1e-12);
    }
  }
}

TEST_CASE("Jacobians match central finite differences") {
  const RobotModel m = make_default_model();
  Rng rng(5);
  const double eps = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    const RobotState s = random_state(m, rng);
    KinematicsCache c;
    forward_kinematics(m, s, c);
    const int frame = rng.uniform_int(0, static_cast<int>(m.frames.size()) - 1);
    const MatX J = frame_jacobian(m, c, frame);
    for (int k = 0; k < m.nv(); ++k) {
      KinematicsCache cp, cm;
      forward_kinematics(m, perturb(m, s, k, eps), cp);
      forward_kinematics(m, perturb(m, s, k, -eps), cm);
      const Vec3 fd = (cp.frame_position(m, frame) - cm.frame_position(m, frame)) /
                      (2 * eps);
      CHECK((fd - J.col(k).head<3>()).norm() < 1e-6);
    }
  }
}

TEST_CASE("Jacobian columns off the kinematic chain are zero") {
  const RobotModel m = make_default_model();
  Rng rng(6);
  const RobotState s = random_state(m, rng);
  KinematicsCache c;
  forward_kinematics(m, s, c);
  const MatX J = frame_jacobian(m, c, m.frame_index("paddle_center"));
  // Leg joints are not on the base->paddle chain.
  for (int j = 0; j < 12; ++j) {
    CHECK(J.col(6 + j).norm() == doctest::Approx(0.0));
  }
  for (int j = 12; j < 17; ++j) {
    CHECK(J.col(6 + j).norm() > 1e-6);
  }
  // The wrist roll axis passes through the paddle center, so it moves the
  // normal tip but not the center.
  CHECK(J.col(6 + 17).norm() < 1e-12);
  const MatX Jt = frame_jacobian(m, c, m.frame_index("paddle_normal_tip"));
  CHECK(Jt.col(6 + 17).norm() > 1e-6);
}

TEST_CASE("frame velocity agrees with Jacobian times velocity") {
  const RobotModel m = make_default_model();
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const RobotState s = random_state(m, rng);
    KinematicsCache c;
    forward_kinematics(m, s, c);
    forward_velocity(m, s, c);
    for (const char* name : {"paddle_center", "foot_hr", "paddle_normal_tip"}) {
      const int f = m.frame_index(name);
      const MatX J = frame_jacobian(m, c, f);
      CHECK((c.frame_velocity(m, f) - J * s.velocity(m)).norm() < 1e-10);
    }
  }
}

TEST_CASE("pendulum gravity torque is m g l sin(theta)") {
  RobotModel m;
  Link base;
  base.name = "base";
  base.mass = 1.0;
  base.inertia = Mat3::Identity();
  m.links.push_back(base);
  Link rod;
  rod.name = "rod";
  rod.mass = 0.7;
  rod.com = Vec3(0, 0, -0.4);  // hangs straight down at q = 0
  rod.inertia = 1e-6 * Mat3::Identity();
  m.links.push_back(rod);
  Joint j;
  j.name = "pivot";
  j.parent_link = 0;
  j.child_link = 1;
  j.axis = Vec3::UnitY();
  j.q_min = -3.14;
  j.q_max = 3.14;
  m.joints.push_back(j);
  m.finalize();

  RobotState s = RobotState::zero(m);
  for (const double theta : {0.0, 0.3, 1.0, -0.7}) {
    s.q_joints[0] = theta;
    const DynamicsTerms t = dynamics_terms(m, s, {Vec3(0, 0, -9.81), false, false});
    // Rotation about +y by theta swings the com toward -x; gravity then
    // pulls the joint back toward zero.
    CHECK(t.tau_g[6] ==
          doctest::Approx(-0.7 * 9.81 * 0.4 * std::sin(theta)).epsilon(1e-9));
  }
}

TEST_CASE("mass matrix is SPD at 1000 random states") {
  const RobotModel m = make_default_model();
  Rng rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const RobotState s = random_state(m, rng);
    const DynamicsTerms t = dynamics_terms(m, s, {Vec3(0, 0, -9.81), false, false});
    CHECK((t.M - t.M.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    Eigen::SelfAdjointEigenSolver<MatX> es(t.M);
    CHECK(es.eigenvalues().minCoeff() > 1e-6);
  }
}

TEST_CASE("Mdot - 2C surrogate: v' Mdot v = 2 v' bias along the flow") {
  const RobotModel m = make_default_model();
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const RobotState s = random_state(m, rng);
    const VecX v = s.velocity(m);
    const double eps = 1e-6;

    // Advance the configuration along v by +/- eps.
    RobotState sp = s, sm = s;
    sp.base_pos += v.head<3>() * eps;
    sm.base_pos -= v.head<3>() * eps;
    sp.base_quat = quat_exp(v.segment<3>(3) * eps) * s.base_quat;
    sm.base_quat = quat_exp(-v.segment<3>(3) * eps) * s.base_quat;
    sp.q_joints += s.v_joints * eps;
    sm.q_joints -= s.v_joints * eps;

    const DynamicsOptions o{Vec3::Zero(), false, false};
    const MatX Mdot =
        (dynamics_terms(m, sp, o).M - dynamics_terms(m, sm, o).M) / (2 * eps);
    const VecX bias = dynamics_terms(m, s, o).bias;
    const double lhs = v.dot(Mdot * v);
    const double rhs = 2.0 * v.dot(bias);
    CHECK(std::abs(lhs - rhs) < 1e-4 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("energy consistency in unconstrained simulation") {
  const RobotModel m = make_default_model();
  Rng rng(10);
  RobotState s = random_state(m, rng, 0.3);
  const Vec3 gravity(0, 0, -9.81);
  VecX u = VecX::NullaryExpr(m.num_actuated(), [&](int) { return rng.normal(0.0, 3.0); });
  const MatX B = m.selection_matrix();

  const double dt = 1e-5;
  double work = 0.0;
  const double e0 = total_energy(m, s, gravity);
  for (int i = 0; i < 2000; ++i) {
    const DynamicsTerms t = dynamics_terms(m, s, {gravity, false, false});
    const VecX rhs = B * u + t.tau_g - t.bias;
    const VecX qdd = t.M.ldlt().solve(rhs);
    const VecX v0 = s.velocity(m);
    s = integrate(m, s, qdd, dt);
    const VecX v1 = s.velocity(m);
    work += 0.5 * (v0 + v1).dot(B * u) * dt;
  }
  const double e1 = total_energy(m, s, gravity);
  CHECK(std::abs(e1 - e0 - work) < 1e-4 * (1.0 + std::abs(e1 - e0)));
}

TEST_CASE("constrained dynamics: static equilibrium holds still") {
  const RobotModel m = make_default_model();
  RobotState s = RobotState::zero(m);
  s.q_joints = m.rest_joints();
  s.base_pos = Vec3(0, 0, 0.6);

  KinematicsCache c;
  forward_kinematics(m, s, c);
  std::vector<Vec3> pins;
  for (const int f : m.foot_frames()) pins.push_back(c.frame_position(m, f));

  const StaticEquilibrium eq = static_equilibrium(m, s);
  CHECK(eq.residual < 1e-8);

  const ConstrainedAccel acc = constrained_forward_dynamics(m, s, eq.u, pins);
  CHECK(acc.qdd.cwiseAbs().maxCoeff() < 1e-6);

  double total_mass = 0.0;
  for (const auto& l : m.links) total_mass += l.mass;
  double fz = 0.0;
  for (int k = 0; k < 4; ++k) fz += acc.lambda[3 * k + 2];
  CHECK(fz == doctest::Approx(total_mass * 9.81).epsilon(1e-6));
}

TEST_CASE("constrained dynamics: zero torque keeps feet still") {
  const RobotModel m = make_default_model();
  Rng rng(11);
  RobotState s = RobotState::zero(m);
  s.q_joints = m.rest_joints();
  s.base_pos = Vec3(0, 0, 0.6);
  KinematicsCache c;
  forward_kinematics(m, s, c);
  std::vector<Vec3> pins;
  for (const int f : m.foot_frames()) pins.push_back(c.frame_position(m, f));

  const VecX u = VecX::Zero(m.num_actuated());
  const ConstrainedAccel acc = constrained_forward_dynamics(m, s, u, pins);
  const DynamicsTerms t = dynamics_terms(m, s);
  // Feet accelerations (J qdd + Jdot v) vanish; at rest Jdot v = 0.
  CHECK((t.J_feet * acc.qdd).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("pinned-feet simulation: drift under 1 mm over 1 s") {
  const RobotModel m = make_default_model();
  RobotState s = RobotState::zero(m);
  s.q_joints = m.rest_joints();
  s.base_pos = Vec3(0, 0, 0.6);
  KinematicsCache c;
  forward_kinematics(m, s, c);
  std::vector<Vec3> pins;
  for (const int f : m.foot_frames()) pins.push_back(c.frame_position(m, f));

  const StaticEquilibrium eq = static_equilibrium(m, s);
  const double dt = 1e-3;
  for (int i = 0; i < 1000; ++i) {
    // Swing-like arm excitation on top of gravity compensation.
    VecX u = eq.u;
    const double t = i * dt;
    u[13] += 6.0 * std::sin(2 * M_PI * 2.0 * t);  // arm_sh1
    u[14] += 4.0 * std::sin(2 * M_PI * 3.0 * t);  // arm_el0
    s = plant_step(m, s, u, pins, {}, dt).state;
  }
  forward_kinematics(m, s, c);
  for (size_t k = 0; k < pins.size(); ++k) {
    const double drift =
        (c.frame_position(m, m.foot_frames()[k]) - pins[k]).norm();
    CHECK(drift < 1e-3);
  }
}

TEST_CASE("Newton check: momentum rate equals gravity plus foot forces") {
  const RobotModel m = make_default_model();
  RobotState s = RobotState::zero(m);
  s.q_joints = m.rest_joints();
  s.base_pos = Vec3(0, 0, 0.6);
  s.base_lin_vel = Vec3(0.05, -0.02, 0.01);
  s.v_joints = 0.3 * VecX::Ones(m.num_joints());
  KinematicsCache c;
  forward_kinematics(m, s, c);
  std::vector<Vec3> pins;
  for (const int f : m.foot_frames()) pins.push_back(c.frame_position(m, f));

  const Vec3 gravity(0, 0, -9.81);
  const VecX u = VecX::Zero(m.num_actuated());

  auto momentum = [&](const RobotState& st) {
    KinematicsCache cc;
    forward_kinematics(m, st, cc);
    forward_velocity(m, st, cc);
    Vec3 p = Vec3::Zero();
    for (size_t l = 0; l < m.links.size(); ++l) {
      p += m.links[l].mass * cc.point_velocity(m, static_cast<int>(l), cc.com[l]);
    }
    return p;
  };

  const double dt = 1e-6;
  const ConstrainedAccel acc = constrained_forward_dynamics(m, s, u, pins);
  const Vec3 p0 = momentum(s);
  const Vec3 p1 = momentum(integrate(m, s, acc.qdd, dt));
  const Vec3 pdot_fd = (p1 - p0) / dt;

  double total_mass = 0.0;
  for (const auto& l : m.links) total_mass += l.mass;
  Vec3 force = total_mass * gravity;
  for (int k = 0; k < 4; ++k) force += acc.lambda.segment<3>(3 * k);
  CHECK((pdot_fd - force).norm() < 1e-5 * (1.0 + force.norm()));
}

TEST_CASE("tangent parameterization round-trips and maps rates correctly") {
  const RobotModel m = make_default_model();
  Rng rng(12);
  const RobotState s = random_state(m, rng);
  const Quat ref = s.base_quat;

  const VecX x = to_tangent(m, s, ref);
  CHECK(x.segment<3>(3).norm() < 1e-12);
  const RobotState s2 = from_tangent(m, x, VecX::Zero(m.nv()), ref);
  CHECK((s2.base_pos - s.base_pos).norm() < 1e-12);
  CHECK(s2.base_quat.angularDistance(s.base_quat) < 1e-12);

  // d/dt exp(phi(t)) ref  ==  dexp(phi) phidot as world angular velocity.
  const Vec3 phi(0.3, -0.5, 0.2);
  const Vec3 phidot(1.1, 0.4, -0.8);
  const double eps = 1e-7;
  const Quat qa = quat_exp(phi - eps * phidot) * ref;
  const Quat qb = quat_exp(phi + eps * phidot) * ref;
  const Vec3 omega_fd = quat_log(qb * qa.conjugate()) / (2 * eps);
  const Vec3 omega = dexp_world(phi) * phidot;
  CHECK((omega - omega_fd).norm() < 1e-5);
}
