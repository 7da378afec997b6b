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

#include "quadpong/opt/sqp.hpp"

#include <stdexcept>

namespace quadpong::opt {

double constraint_violation(const VecX& c, const VecX& lower, const VecX& upper) {
  double v = 0.0;
  for (int i = 0; i < c.size(); ++i) {
    v = std::max({v, lower[i] - c[i], c[i] - upper[i]});
  }
  return std::max(v, 0.0);
}

SqpResult sqp_solve(const NlpProblem& nlp, const VecX& x0,
                    const SqpSettings& settings) {
  const int n = nlp.num_vars;
  const int m = static_cast<int>(nlp.lower.size());
  if (x0.size() != n) throw std::invalid_argument("sqp_solve: bad x0 size");

  SqpResult result;
  result.x = x0;

  QpProblem qp;
  qp.P = nlp.P;
  qp.P.diagonal().array() += settings.levenberg;
  qp.q = nlp.q;

  VecX c(m);
  MatX J(m, n);
  QpSolver solver;

  if (nlp.on_iteration) nlp.on_iteration(0, result.x);
  nlp.constraints(result.x, c, J);
  if (!c.allFinite() || !J.allFinite()) {
    throw std::runtime_error("sqp_solve: non-finite constraint callback output");
  }
  result.violation_trace.push_back(constraint_violation(c, nlp.lower, nlp.upper));

  for (int it = 1; it <= settings.iters; ++it) {
    if (it > 1 && nlp.on_iteration) {
      nlp.on_iteration(it - 1, result.x);
      nlp.constraints(result.x, c, J);  // piece may have changed
    }
    // Local QP in absolute coordinates: bounds shift by c(x_k) - J x_k.
    const VecX shift = c - J * result.x;
    qp.A = J;
    qp.lower = nlp.lower - shift;
    qp.upper = nlp.upper - shift;

    const QpSolution qs = solver.solve(qp, settings.qp);
    ++result.qp_solves;
    result.last_qp_status = qs.status;
    if (qs.status == QpStatus::PrimalInfeasible ||
        qs.status == QpStatus::DualInfeasible || !qs.x.allFinite()) {
      result.ok = false;
      result.failed_iteration = it;
      return result;
    }
    solver.warm_start(qs.x, qs.y);

    result.x += settings.damping * (qs.x - result.x);

    nlp.constraints(result.x, c, J);
    if (!c.allFinite() || !J.allFinite()) {
      throw std::runtime_error("sqp_solve: non-finite constraint callback output");
    }
    result.violation_trace.push_back(constraint_violation(c, nlp.lower, nlp.upper));
  }
  return result;
}

}  // namespace quadpong::opt
