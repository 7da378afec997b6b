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

#include "quadpong/aim/aim.hpp"

#include <cmath>

namespace quadpong::aim {

namespace {

// Paddle-ball contact written in plain vector operations. With a unit
// normal this reproduces ball::impulse_contact exactly; inside the solver
// the normal is left unnormalized (its scale is the sixth degree of
// freedom of the contact block) and renormalized post-solve.
struct ContactModel {
  Vec3 v_in, w_in;
  double restitution, mu, radius, stick_ratio;

  // stick_ratio = 1 + m r^2 / I = 5/2 for a hollow sphere.
  ContactModel(const Vec3& v, const Vec3& w, const ball::BallPhysicalParams& b,
               double e, double mu_in)
      : v_in(v), w_in(w), restitution(e), mu(mu_in), radius(b.radius),
        stick_ratio(1.0 + b.mass * b.radius * b.radius / b.inertia) {}

  // branch: 0 = stick, 1 = slide. When `choose_branch` the branch is picked
  // from the inputs and reported; otherwise the given branch is held fixed
  // so finite differences stay on one smooth piece.
  void eval(const Vec3& v_des, const Vec3& n, bool choose_branch, int& branch,
            Vec3& v_out, Vec3& w_out) const {
    const Vec3 lever = -radius * n;
    const Vec3 u = v_in + w_in.cross(lever) - v_des;
    const double u_n = u.dot(n);
    const Vec3 jn = -(1.0 + restitution) * u_n * n;
    const Vec3 slip = u - u_n * n;
    const double jt_max = mu * (1.0 + restitution) * std::abs(u_n);
    Vec3 jt = -slip / stick_ratio;
    if (choose_branch) branch = jt.norm() > jt_max ? 1 : 0;
    if (branch == 1) {
      const double slip_norm = slip.norm();
      jt = slip_norm > 1e-14 ? Vec3(-jt_max * slip / slip_norm) : Vec3::Zero();
    }
    v_out = v_in + jn + jt;
    // Delta omega = (lever x m jt) / I = -(m r / I) n x jt.
    w_out = w_in - (stick_ratio - 1.0) / radius * n.cross(jt);
  }
};

}  // namespace

Vec3 choose_return_spin(const Vec3& omega_minus, const SpinPolicy& policy) {
  Vec3 w = policy.gain * omega_minus;
  for (int i = 0; i < 3; ++i) w[i] = std::clamp(w[i], -policy.clamp, policy.clamp);
  return w;
}

double choose_flight_time(const ball::BallState& ball_pre, const Vec3& p_land,
                          const FlightTimePolicy& policy) {
  const double dist = (p_land - ball_pre.r).norm();
  return std::clamp(dist / policy.nominal_speed, policy.t_min, policy.t_max);
}

AimSolution AimSolver::solve(const AimRequest& request) const {
  const int N = request.nodes;
  const int n_vars = 6 * N + 6;
  const double dt = request.t_land / (N - 1);
  const Vec3 p_des = request.ball_pre.r;
  const Vec3 g = aero_.gravity;
  const double radius = env_.ball.radius;

  const ContactModel contact(request.ball_pre.v, request.ball_pre.w, env_.ball,
                             settings_.paddle_restitution, settings_.paddle_mu);

  // Variable layout: [r_0..r_{N-1}; v_0..v_{N-1}; v_des; n_des].
  const int off_r = 0;
  const int off_v = 3 * N;
  const int off_vd = 6 * N;
  const int off_nd = 6 * N + 3;

  // Rows: r0 tie (3), contact velocity (3), contact spin (3),
  // dynamics (6(N-1)), landing (3), optional net clearance (1).
  const int n_dyn = 6 * (N - 1);
  const int row_dyn = 9;
  const int row_land = row_dyn + n_dyn;
  const int n_rows = row_land + 3 + (settings_.net_constraint ? 1 : 0);

  // The branch is re-chosen from the iterate at each linearization and held
  // fixed inside it (and across the FD probes).
  int branch = 0;
  Vec3 aero_spin = request.omega_plus;

  opt::NlpProblem nlp;
  nlp.num_vars = n_vars;
  nlp.P = MatX::Zero(n_vars, n_vars);
  nlp.P.block<3, 3>(off_vd, off_vd) = 2.0 * settings_.w_v * Mat3::Identity();
  nlp.q = VecX::Zero(n_vars);
  nlp.lower = VecX::Zero(n_rows);
  nlp.upper = VecX::Zero(n_rows);
  nlp.lower.segment<3>(0) = p_des;
  nlp.upper.segment<3>(0) = p_des;
  nlp.lower.segment<3>(6) = request.omega_plus;
  nlp.upper.segment<3>(6) = request.omega_plus;
  nlp.lower.segment<3>(row_land) = request.p_land;
  nlp.upper.segment<3>(row_land) = request.p_land;
  if (settings_.net_constraint) {
    nlp.lower[n_rows - 1] =
        env_.table.net_height + radius + settings_.net_margin;
    nlp.upper[n_rows - 1] = opt::kInf;
  }

  nlp.constraints = [&](const VecX& x, VecX& c, MatX& J) {
    c.resize(n_rows);
    J.resize(n_rows, n_vars);
    J.setZero();

    const Vec3 v_des = x.segment<3>(off_vd);
    const Vec3 n_des = x.segment<3>(off_nd);

    // r0 tie.
    c.segment<3>(0) = x.segment<3>(off_r);
    J.block<3, 3>(0, off_r).setIdentity();

    // Contact map, FD Jacobian with the branch held fixed.
    int b = branch;
    Vec3 v_out, w_out;
    contact.eval(v_des, n_des, false, b, v_out, w_out);
    c.segment<3>(3) = x.segment<3>(off_v) - v_out;
    c.segment<3>(6) = w_out;
    J.block<3, 3>(3, off_v).setIdentity();
    const double h = 1e-7;
    for (int k = 0; k < 6; ++k) {
      Vec3 vp = v_des, np = n_des, vm = v_des, nm = n_des;
      if (k < 3) {
        vp[k] += h;
        vm[k] -= h;
      } else {
        np[k - 3] += h;
        nm[k - 3] -= h;
      }
      Vec3 v1, w1, v0, w0;
      contact.eval(vp, np, false, b, v1, w1);
      contact.eval(vm, nm, false, b, v0, w0);
      const int col = off_vd + k;
      J.block<3, 1>(3, col) = -(v1 - v0) / (2 * h);
      J.block<3, 1>(6, col) = (w1 - w0) / (2 * h);
    }

    // Node dynamics with a second-order position update.
    for (int n = 0; n + 1 < N; ++n) {
      const Vec3 vn = x.segment<3>(off_v + 3 * n);
      const Vec3 a = ball::aero_accel(vn, aero_spin, aero_);
      const Mat3 da = ball::aero_accel_dv(vn, aero_spin, aero_);
      const int row_r = row_dyn + 6 * n;
      const int row_v = row_r + 3;
      c.segment<3>(row_r) = x.segment<3>(off_r + 3 * (n + 1)) -
                            x.segment<3>(off_r + 3 * n) - vn * dt -
                            0.5 * a * dt * dt;
      c.segment<3>(row_v) =
          x.segment<3>(off_v + 3 * (n + 1)) - vn - a * dt;
      J.block<3, 3>(row_r, off_r + 3 * (n + 1)).setIdentity();
      J.block<3, 3>(row_r, off_r + 3 * n) = -Mat3::Identity();
      J.block<3, 3>(row_r, off_v + 3 * n) =
          -dt * Mat3::Identity() - 0.5 * dt * dt * da;
      J.block<3, 3>(row_v, off_v + 3 * (n + 1)).setIdentity();
      J.block<3, 3>(row_v, off_v + 3 * n) = -Mat3::Identity() - dt * da;
    }

    // Landing.
    c.segment<3>(row_land) = x.segment<3>(off_r + 3 * (N - 1));
    J.block<3, 3>(row_land, off_r + 3 * (N - 1)).setIdentity();

    // Net clearance at the node nearest the net plane x = 0.
    if (settings_.net_constraint) {
      int k_net = 0;
      double best = std::abs(x[off_r]);
      for (int n = 1; n < N; ++n) {
        const double d = std::abs(x[off_r + 3 * n]);
        if (d < best) {
          best = d;
          k_net = n;
        }
      }
      c[n_rows - 1] = x[off_r + 3 * k_net + 2];
      J(n_rows - 1, off_r + 3 * k_net + 2) = 1.0;
    }
    return;
  };

  // Initialization: drag-free parabola to the target, bisector normal.
  VecX x0 = VecX::Zero(n_vars);
  const Vec3 v0_out = (request.p_land - p_des) / request.t_land -
                      0.5 * g * request.t_land;
  for (int n = 0; n < N; ++n) {
    const double t = n * dt;
    x0.segment<3>(off_r + 3 * n) = p_des + v0_out * t + 0.5 * g * t * t;
    x0.segment<3>(off_v + 3 * n) = v0_out + g * t;
  }
  const Vec3 d_in = request.ball_pre.v.normalized();
  Vec3 n0 = (v0_out.normalized() - d_in).normalized();
  x0.segment<3>(off_nd) = n0;
  const double e = settings_.paddle_restitution;
  const double want_n = v0_out.dot(n0);
  const double in_n = request.ball_pre.v.dot(n0);
  const Vec3 v_pad0 = ((want_n + e * in_n) / (1.0 + e)) * n0 +
                      0.3 * (v0_out - want_n * n0);
  x0.segment<3>(off_vd) = v_pad0;

  // Choose the initial contact branch from the initial guess.
  {
    Vec3 v_out, w_out;
    contact.eval(v_pad0, n0, true, branch, v_out, w_out);
  }

  opt::SqpSettings sqp;
  sqp.iters = settings_.sqp_iters;
  sqp.qp = settings_.qp;

  // Branch re-selection between passes requires driving the SQP manually
  // one pass at a time so the NLP stays piecewise-smooth inside each pass.
  AimSolution sol;
  VecX x = x0;
  opt::SqpSettings one = sqp;
  one.iters = 1;
  sol.violation_trace.clear();
  bool first = true;
  for (int it = 0; it < settings_.sqp_iters; ++it) {
    {
      Vec3 v_out, w_out;
      contact.eval(x.segment<3>(off_vd), x.segment<3>(off_nd), true, branch,
                   v_out, w_out);
    }
    const opt::SqpResult r = opt::sqp_solve(nlp, x, one);
    if (!r.ok) {
      sol.status = AimStatus::SqpFailure;
      sol.iterations = it + 1;
      return sol;
    }
    if (first) {
      sol.violation_trace.push_back(r.violation_trace.front());
      first = false;
    }
    sol.violation_trace.push_back(r.violation_trace.back());
    x = r.x;
    sol.iterations = it + 1;
  }
  sol.final_violation = sol.violation_trace.back();

  // Assemble the solution; the normal is renormalized here.
  sol.command.p_des = p_des;
  sol.command.v_des = x.segment<3>(off_vd);
  sol.command.n_des = x.segment<3>(off_nd).normalized();
  sol.traj_r = Eigen::Map<const MatX>(x.data() + off_r, 3, N);
  sol.traj_v = Eigen::Map<const MatX>(x.data() + off_v, 3, N);

  // Independent check: unit-normal impulse contact, then fine integration.
  ball::ContactSurface paddle;
  paddle.normal = sol.command.n_des;
  paddle.point = p_des - radius * sol.command.n_des;
  paddle.velocity = sol.command.v_des;
  paddle.restitution = settings_.paddle_restitution;
  paddle.friction_mu = settings_.paddle_mu;
  ball::BallState pre = request.ball_pre;
  if ((pre.v - paddle.velocity).dot(paddle.normal) < 0.0) {
    const ball::BallState post = ball::impulse_contact(pre, paddle, env_.ball);
    sol.omega_out = post.w;
    ball::FlightOptions fopts;
    fopts.max_time = 2.0 * request.t_land + 0.5;
    const ball::ReturnFlight rf = ball::simulate_return(post, aero_, env_, fopts);
    sol.net_cleared = rf.net_crossed && rf.kind == ball::ReturnEventKind::TableContact;
    sol.sim_landing = rf.state.r;
    sol.landing_error =
        (rf.state.r - request.p_land).head<2>().norm() +
        (rf.kind == ball::ReturnEventKind::TableContact ? 0.0 : 10.0);
  } else {
    sol.landing_error = 10.0;  // separating contact: nonsense command
  }

  sol.status = sol.final_violation < settings_.converged_tol
                   ? AimStatus::Converged
                   : AimStatus::InfeasibleTarget;
  return sol;
}

}  // namespace quadpong::aim
