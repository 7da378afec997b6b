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

#include <limits>
#include <string>

#include "quadpong/core/types.hpp"

namespace quadpong::opt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Dense convex QP:
///   minimize 0.5 x'Px + q'x   subject to  lower <= Ax <= upper.
/// Rows with lower == upper are equalities.
struct QpProblem {
  MatX P;
  VecX q;
  MatX A;
  VecX lower;
  VecX upper;

  int num_vars() const { return static_cast<int>(P.rows()); }
  int num_constraints() const { return static_cast<int>(A.rows()); }

  /// Throws std::invalid_argument on inconsistent dimensions, asymmetric P,
  /// or lower > upper.
  void validate() const;
};

enum class QpStatus { Solved, MaxIters, PrimalInfeasible, DualInfeasible };

std::string to_string(QpStatus s);

struct QpSolution {
  VecX x;
  VecX y;  // dual for Ax; y_i >= 0 pushes on upper, y_i <= 0 on lower
  VecX z;  // projected constraint values
  QpStatus status{QpStatus::MaxIters};
  int iterations{0};
  double primal_residual{kInf};
  double dual_residual{kInf};
};

struct QpSettings {
  int max_iters{4000};
  double eps_abs{1e-8};
  double eps_rel{1e-8};
  double sigma{1e-6};
  double rho{0.1};
  double rho_eq_scale{1e3};  // equality rows get rho * rho_eq_scale
  double alpha{1.6};         // over-relaxation
  bool adaptive_rho{true};
  bool polish{true};
  int check_interval{25};
};

/// Operator-splitting (ADMM) solver with over-relaxation, per-row rho,
/// and a terminal KKT polish on the detected active set. Instances own
/// workspace and an optional warm start; use one instance per thread.
class QpSolver {
 public:
  QpSolution solve(const QpProblem& prob, const QpSettings& settings);

  /// Seeds the next solve. Never changes the fixed point, only the path.
  void warm_start(const VecX& x, const VecX& y);
  void clear_warm_start();

 private:
  bool has_warm_{false};
  VecX warm_x_, warm_y_;
};

}  // namespace quadpong::opt
