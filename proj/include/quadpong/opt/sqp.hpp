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

#include <functional>
#include <vector>

#include "quadpong/opt/qp.hpp"

namespace quadpong::opt {

/// Nonlinear problem with an exact quadratic cost and nonlinear constraints:
///   minimize 0.5 x'Px + q'x   subject to  lower <= c(x) <= upper.
/// Both planners' costs are quadratic by construction, so the SQP driver
/// only linearizes the constraints.
struct NlpProblem {
  int num_vars{0};
  MatX P;
  VecX q;
  VecX lower;
  VecX upper;
  /// Fills c(x) and its Jacobian. Row count is fixed across calls.
  std::function<void(const VecX& x, VecX& c, MatX& J)> constraints;
  /// Optional: called with the iterate before each linearization pass so
  /// piecewise-smooth problems can re-select their active piece.
  std::function<void(int iteration, const VecX& x)> on_iteration;
};

struct SqpSettings {
  int iters{4};
  double damping{1.0};       // step fraction in (0, 1]
  double levenberg{1e-6};    // Hessian regularization added as lambda*I
  QpSettings qp{};
};

struct SqpResult {
  VecX x;
  /// Max constraint violation before iteration 1, then after each pass.
  std::vector<double> violation_trace;
  bool ok{true};
  int failed_iteration{-1};  // SQP pass (1-based) where the QP failed
  QpStatus last_qp_status{QpStatus::Solved};
  int qp_solves{0};
};

/// Runs exactly `settings.iters` linearize-and-solve passes with full
/// (or damped) steps, warm-starting each QP from the previous pass.
/// Throws on non-finite callback output.
SqpResult sqp_solve(const NlpProblem& nlp, const VecX& x0,
                    const SqpSettings& settings);

/// Max elementwise violation of lower <= c <= upper.
double constraint_violation(const VecX& c, const VecX& lower, const VecX& upper);

}  // namespace quadpong::opt
