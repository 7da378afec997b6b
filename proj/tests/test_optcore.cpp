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

#include <Eigen/LU>
#include <cmath>
#include <optional>

#include "quadpong/core/rng.hpp"
#include "quadpong/opt/sqp.hpp"

using namespace quadpong;
using namespace quadpong::opt;

namespace {

// Exhaustive active-set oracle for small strictly convex QPs: every row is
// tried as inactive, at its lower, or at its upper bound; KKT candidates are
// screened for primal feasibility and dual signs.
std::optional<VecX> brute_force_qp(const QpProblem& p, double tol = 1e-8) {
  const int n = p.num_vars();
  const int m = p.num_constraints();
  std::optional<VecX> best;
  double best_obj = kInf;

  std::vector<int> state(m, 0);  // 0 inactive, 1 lower, 2 upper
  const long total = static_cast<long>(std::pow(3, m));
  for (long code = 0; code < total; ++code) {
    long c = code;
    bool valid = true;
    for (int i = 0; i < m; ++i) {
      state[i] = static_cast<int>(c % 3);
      c /= 3;
      const bool eq = p.upper[i] - p.lower[i] < 1e-12;
      if (eq && state[i] == 0) valid = false;
      if (state[i] == 1 && !std::isfinite(p.lower[i])) valid = false;
      if (state[i] == 2 && !std::isfinite(p.upper[i])) valid = false;
    }
    if (!valid) continue;

    std::vector<int> act;
    for (int i = 0; i < m; ++i) {
      if (state[i] != 0) act.push_back(i);
    }
    const int k = static_cast<int>(act.size());
    MatX kkt = MatX::Zero(n + k, n + k);
    kkt.topLeftCorner(n, n) = p.P;
    VecX rhs(n + k);
    rhs.head(n) = -p.q;
    for (int j = 0; j < k; ++j) {
      const int i = act[j];
      kkt.block(n + j, 0, 1, n) = p.A.row(i);
      kkt.block(0, n + j, n, 1) = p.A.row(i).transpose();
      rhs[n + j] = state[i] == 1 ? p.lower[i] : p.upper[i];
    }
    Eigen::FullPivLU<MatX> lu(kkt);
    if (!lu.isInvertible()) continue;
    const VecX sol = lu.solve(rhs);

    const VecX x = sol.head(n);
    const VecX ax = p.A * x;
    bool ok = true;
    for (int i = 0; i < m; ++i) {
      if (ax[i] < p.lower[i] - tol || ax[i] > p.upper[i] + tol) ok = false;
    }
    for (int j = 0; j < k && ok; ++j) {
      const double nu = sol[n + j];
      const bool eq = p.upper[act[j]] - p.lower[act[j]] < 1e-12;
      if (eq) continue;
      if (state[act[j]] == 1 && nu > tol) ok = false;   // lower active: y <= 0
      if (state[act[j]] == 2 && nu < -tol) ok = false;  // upper active: y >= 0
    }
    if (!ok) continue;

    const double obj = 0.5 * x.dot(p.P * x) + p.q.dot(x);
    if (obj < best_obj - 1e-12) {
      best_obj = obj;
      best = x;
    }
  }
  return best;
}

QpProblem random_strictly_convex_qp(Rng& rng, int n, int m) {
  QpProblem p;
  MatX B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = rng.normal();
  p.P = B * B.transpose() + 0.5 * MatX::Identity(n, n);
  p.q = VecX::NullaryExpr(n, [&](int) { return rng.normal(0.0, 2.0); });
  p.A = MatX::NullaryExpr(m, n, [&](int, int) { return rng.normal(); });
  p.lower.resize(m);
  p.upper.resize(m);
  for (int i = 0; i < m; ++i) {
    const double c = rng.normal();
    const double w = rng.uniform(0.1, 2.0);
    p.lower[i] = c - w;
    p.upper[i] = c + w;
    if (rng.uniform() < 0.2) p.lower[i] = -kInf;  // one-sided rows
  }
  return p;
}

}  // namespace

TEST_CASE("solve_qp: scalar bound by inspection") {
  QpProblem p;
  p.P = MatX::Identity(1, 1);
  p.q = VecX::Zero(1);
  p.A = MatX::Identity(1, 1);
  p.lower = VecX::Constant(1, 1.0);
  p.upper = VecX::Constant(1, kInf);
  QpSolver solver;
  const QpSolution s = solver.solve(p, {});
  CHECK(s.status == QpStatus::Solved);
  CHECK(s.x[0] == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("solve_qp: symmetric equality split") {
  QpProblem p;
  p.P = MatX::Identity(2, 2);
  p.q = VecX::Zero(2);
  p.A = MatX::Ones(1, 2);
  p.lower = VecX::Constant(1, 1.0);
  p.upper = VecX::Constant(1, 1.0);
  QpSolver solver;
  const QpSolution s = solver.solve(p, {});
  CHECK(s.status == QpStatus::Solved);
  CHECK(s.x[0] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(s.x[1] == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("solve_qp: validation rejects malformed problems") {
  QpProblem p;
  p.P = MatX::Identity(2, 2);
  p.P(0, 1) = 0.5;  // asymmetric
  p.q = VecX::Zero(2);
  p.A = MatX::Identity(2, 2);
  p.lower = VecX::Zero(2);
  p.upper = VecX::Ones(2);
  QpSolver solver;
  CHECK_THROWS_AS(solver.solve(p, {}), std::invalid_argument);
  p.P(0, 1) = 0.0;
  p.q = VecX::Zero(3);
  CHECK_THROWS_AS(solver.solve(p, {}), std::invalid_argument);
}

TEST_CASE("solve_qp matches the brute-force active-set oracle") {
  Rng rng(11);
  QpSolver solver;
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = rng.uniform_int(2, 20);
    const int m = rng.uniform_int(1, 8);
    const QpProblem p = random_strictly_convex_qp(rng, n, m);
    const auto oracle = brute_force_qp(p);
    if (!oracle) continue;  // infeasible draw
    solver.clear_warm_start();
    const QpSolution s = solver.solve(p, {});
    REQUIRE(s.status == QpStatus::Solved);
    CHECK((s.x - *oracle).norm() < 1e-6 * (1.0 + oracle->norm()));
    ++solved;
  }
  CHECK(solved >= 40);
}

TEST_CASE("solve_qp: KKT conditions at the solution") {
  Rng rng(13);
  QpSolver solver;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.uniform_int(2, 20);
    const int m = rng.uniform_int(1, 40);
    const QpProblem p = random_strictly_convex_qp(rng, n, m);
    solver.clear_warm_start();
    const QpSolution s = solver.solve(p, {});
    if (s.status != QpStatus::Solved) continue;
    const VecX stat = p.P * s.x + p.q + p.A.transpose() * s.y;
    CHECK(stat.cwiseAbs().maxCoeff() < 1e-6);
    const VecX ax = p.A * s.x;
    for (int i = 0; i < m; ++i) {
      CHECK(ax[i] > p.lower[i] - 1e-6);
      CHECK(ax[i] < p.upper[i] + 1e-6);
      // Complementary slackness: inactive rows carry no dual.
      const double slack = std::min(ax[i] - p.lower[i], p.upper[i] - ax[i]);
      if (slack > 1e-4) CHECK(std::abs(s.y[i]) < 1e-6);
    }
  }
}

TEST_CASE("solve_qp: joint scaling of P and q leaves the argmin unchanged") {
  Rng rng(17);
  QpSolver solver;
  const QpProblem p = random_strictly_convex_qp(rng, 8, 6);
  solver.clear_warm_start();
  const QpSolution s1 = solver.solve(p, {});
  QpProblem p2 = p;
  p2.P *= 37.0;
  p2.q *= 37.0;
  solver.clear_warm_start();
  const QpSolution s2 = solver.solve(p2, {});
  REQUIRE(s1.status == QpStatus::Solved);
  REQUIRE(s2.status == QpStatus::Solved);
  CHECK((s1.x - s2.x).norm() < 1e-5 * (1.0 + s1.x.norm()));
}

TEST_CASE("solve_qp: warm start from the solution terminates quickly") {
  Rng rng(19);
  QpSolver solver;
  const QpProblem p = random_strictly_convex_qp(rng, 10, 8);
  const QpSolution cold = solver.solve(p, {});
  REQUIRE(cold.status == QpStatus::Solved);
  solver.warm_start(cold.x, cold.y);
  QpSettings st;
  st.check_interval = 1;
  const QpSolution warm = solver.solve(p, st);
  CHECK(warm.status == QpStatus::Solved);
  CHECK(warm.iterations <= 5);
  CHECK((warm.x - cold.x).norm() < 1e-6 * (1.0 + cold.x.norm()));
}

TEST_CASE("solve_qp: infeasible problem is detected") {
  QpProblem p;
  p.P = MatX::Identity(1, 1);
  p.q = VecX::Zero(1);
  p.A = MatX(2, 1);
  p.A << 1.0, 1.0;
  p.lower.resize(2);
  p.upper.resize(2);
  p.lower << 1.0, -kInf;
  p.upper << kInf, -1.0;  // x >= 1 and x <= -1
  QpSolver solver;
  QpSettings st;
  st.max_iters = 20000;
  const QpSolution s = solver.solve(p, st);
  CHECK(s.status == QpStatus::PrimalInfeasible);
}

TEST_CASE("sqp_solve: quadratic problem with linear constraints in one pass") {
  NlpProblem nlp;
  nlp.num_vars = 2;
  nlp.P = MatX::Identity(2, 2);
  nlp.q = VecX::Zero(2);
  nlp.lower = VecX::Constant(1, 1.0);
  nlp.upper = VecX::Constant(1, 1.0);
  nlp.constraints = [](const VecX& x, VecX& c, MatX& J) {
    c.resize(1);
    J.resize(1, 2);
    c[0] = x[0] + x[1];
    J << 1.0, 1.0;
  };
  SqpSettings st;
  st.iters = 3;
  const SqpResult r = sqp_solve(nlp, VecX::Zero(2), st);
  REQUIRE(r.ok);
  CHECK(r.qp_solves == 3);
  CHECK(r.x[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.violation_trace.size() == 4);
  CHECK(r.violation_trace[0] == doctest::Approx(1.0));
  CHECK(r.violation_trace[1] < 1e-6);
}

TEST_CASE("sqp_solve: x^2 = 1 from x0 = 2 converges within 5 iterations") {
  NlpProblem nlp;
  nlp.num_vars = 1;
  nlp.P = MatX::Identity(1, 1) * 2.0;  // cost x^2
  nlp.q = VecX::Zero(1);
  nlp.lower = VecX::Constant(1, 1.0);
  nlp.upper = VecX::Constant(1, 1.0);
  nlp.constraints = [](const VecX& x, VecX& c, MatX& J) {
    c.resize(1);
    J.resize(1, 1);
    c[0] = x[0] * x[0];
    J(0, 0) = 2.0 * x[0];
  };
  SqpSettings st;
  st.iters = 5;
  const SqpResult r = sqp_solve(nlp, VecX::Constant(1, 2.0), st);
  REQUIRE(r.ok);
  CHECK(std::abs(std::abs(r.x[0]) - 1.0) < 1e-6);
  CHECK(r.violation_trace.back() < 1e-6);
  // Hand-checked Newton-SQP recursion: x_{k+1} = (x_k^2 + 1) / (2 x_k).
  // From 2: 1.25, 1.025, 1.0003...
  CHECK(r.violation_trace[1] == doctest::Approx(1.25 * 1.25 - 1.0).epsilon(1e-3));
}
