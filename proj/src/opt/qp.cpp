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

#include "quadpong/opt/qp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quadpong::opt {

void QpProblem::validate() const {
  const int n = num_vars();
  const int m = num_constraints();
  if (P.rows() != n || P.cols() != n || q.size() != n) {
    throw std::invalid_argument("QpProblem: cost dimensions inconsistent");
  }
  if ((A.rows() != m) || (m > 0 && A.cols() != n) || lower.size() != m ||
      upper.size() != m) {
    throw std::invalid_argument("QpProblem: constraint dimensions inconsistent");
  }
  if (n > 0 && (P - P.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("QpProblem: P is not symmetric");
  }
  for (int i = 0; i < m; ++i) {
    if (lower[i] > upper[i]) {
      throw std::invalid_argument("QpProblem: lower > upper");
    }
  }
}

std::string to_string(QpStatus s) {
  switch (s) {
    case QpStatus::Solved: return "Solved";
    case QpStatus::MaxIters: return "MaxIters";
    case QpStatus::PrimalInfeasible: return "PrimalInfeasible";
    case QpStatus::DualInfeasible: return "DualInfeasible";
  }
  return "Unknown";
}

namespace {

double inf_norm(const VecX& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

// KKT refinement on the active set detected from the ADMM duals. Returns
// true and overwrites (x, y) when the refined point has smaller residuals.
bool polish(const QpProblem& prob, VecX& x, VecX& y, double& rp, double& rd) {
  const int n = prob.num_vars();
  const int m = prob.num_constraints();
  std::vector<int> act;
  std::vector<double> act_sign;
  for (int i = 0; i < m; ++i) {
    const bool eq = prob.upper[i] - prob.lower[i] < 1e-12;
    if (eq || y[i] < -1e-9 || y[i] > 1e-9) {
      act.push_back(i);
      act_sign.push_back(eq ? 0.0 : (y[i] > 0.0 ? 1.0 : -1.0));
    }
  }
  const int k = static_cast<int>(act.size());
  MatX kkt = MatX::Zero(n + k, n + k);
  kkt.topLeftCorner(n, n) = prob.P;
  kkt.topLeftCorner(n, n).diagonal().array() += 1e-11;
  VecX rhs(n + k);
  rhs.head(n) = -prob.q;
  for (int j = 0; j < k; ++j) {
    const int i = act[j];
    kkt.block(n + j, 0, 1, n) = prob.A.row(i);
    kkt.block(0, n + j, n, 1) = prob.A.row(i).transpose();
    kkt(n + j, n + j) = -1e-11;
    rhs[n + j] = act_sign[j] > 0.0 ? prob.upper[i] : prob.lower[i];
    if (act_sign[j] == 0.0) rhs[n + j] = prob.upper[i];
  }
  Eigen::PartialPivLU<MatX> lu(kkt);
  const VecX sol = lu.solve(rhs);
  if (!sol.allFinite()) return false;

  VecX x_new = sol.head(n);
  VecX y_new = VecX::Zero(m);
  for (int j = 0; j < k; ++j) y_new[act[j]] = sol[n + j];

  const VecX ax = prob.A * x_new;
  VecX viol(m);
  for (int i = 0; i < m; ++i) {
    viol[i] = std::max({0.0, prob.lower[i] - ax[i], ax[i] - prob.upper[i]});
  }
  const double rp_new = inf_norm(viol);
  const double rd_new = inf_norm(prob.P * x_new + prob.q + prob.A.transpose() * y_new);
  if (rp_new <= rp + 1e-12 && rd_new <= rd + 1e-12) {
    x = x_new;
    y = y_new;
    rp = rp_new;
    rd = rd_new;
    return true;
  }
  return false;
}

}  // namespace

void QpSolver::warm_start(const VecX& x, const VecX& y) {
  warm_x_ = x;
  warm_y_ = y;
  has_warm_ = true;
}

void QpSolver::clear_warm_start() { has_warm_ = false; }

QpSolution QpSolver::solve(const QpProblem& prob, const QpSettings& st) {
  prob.validate();
  const int n = prob.num_vars();
  const int m = prob.num_constraints();

  QpSolution sol;
  sol.x = VecX::Zero(n);
  sol.y = VecX::Zero(m);
  sol.z = VecX::Zero(m);
  if (has_warm_ && warm_x_.size() == n && warm_y_.size() == m) {
    sol.x = warm_x_;
    sol.y = warm_y_;
    sol.z = prob.A * sol.x;
  }

  VecX rho_vec(m);
  auto fill_rho = [&](double rho) {
    for (int i = 0; i < m; ++i) {
      const bool eq = prob.upper[i] - prob.lower[i] < 1e-12;
      rho_vec[i] = std::clamp(eq ? rho * st.rho_eq_scale : rho, 1e-8, 1e8);
    }
  };
  double rho = st.rho;
  fill_rho(rho);

  MatX M(n, n);
  Eigen::LLT<MatX> llt;
  auto factor = [&]() {
    M = prob.P;
    M.diagonal().array() += st.sigma;
    if (m > 0) M.noalias() += prob.A.transpose() * rho_vec.asDiagonal() * prob.A;
    llt.compute(M);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("QpSolver: KKT factorization failed");
    }
  };
  factor();

  VecX x = sol.x, z = sol.z, y = sol.y;
  VecX x_prev = x, y_prev = y;
  int iter = 0;
  double rp = kInf, rd = kInf;

  for (iter = 1; iter <= st.max_iters; ++iter) {
    x_prev = x;
    y_prev = y;

    VecX rhs = st.sigma * x - prob.q;
    if (m > 0) rhs.noalias() += prob.A.transpose() * (rho_vec.cwiseProduct(z) - y);
    const VecX x_t = llt.solve(rhs);
    const VecX z_t = m > 0 ? VecX(prob.A * x_t) : VecX();

    x = st.alpha * x_t + (1.0 - st.alpha) * x;
    if (m > 0) {
      const VecX z_r = st.alpha * z_t + (1.0 - st.alpha) * z;
      VecX z_new = z_r + y.cwiseQuotient(rho_vec);
      for (int i = 0; i < m; ++i) {
        z_new[i] = std::clamp(z_new[i], prob.lower[i], prob.upper[i]);
      }
      y += rho_vec.cwiseProduct(z_r - z_new);
      z = z_new;
    }

    if (iter % st.check_interval == 0 || iter == st.max_iters) {
      const VecX ax = m > 0 ? VecX(prob.A * x) : VecX();
      const VecX px = prob.P * x;
      const VecX aty = m > 0 ? VecX(prob.A.transpose() * y) : VecX::Zero(n);
      rp = m > 0 ? inf_norm(ax - z) : 0.0;
      rd = inf_norm(px + prob.q + aty);
      const double eps_p =
          st.eps_abs + st.eps_rel * std::max(m > 0 ? inf_norm(ax) : 0.0,
                                             m > 0 ? inf_norm(z) : 0.0);
      const double eps_d =
          st.eps_abs +
          st.eps_rel * std::max({inf_norm(px), inf_norm(aty), inf_norm(prob.q)});
      if (rp <= eps_p && rd <= eps_d) {
        sol.status = QpStatus::Solved;
        break;
      }

      // Infeasibility certificates from the iterate deltas.
      const double eps_inf = 1e-6;
      if (m > 0) {
        VecX dy = y - y_prev;
        const double dy_norm = inf_norm(dy);
        if (dy_norm > 1e-12) {
          for (int i = 0; i < m; ++i) {
            if (std::abs(dy[i]) < eps_inf * dy_norm) dy[i] = 0.0;
          }
          double support = 0.0;
          bool bounded = true;
          for (int i = 0; i < m; ++i) {
            if (dy[i] > 0.0) {
              if (!std::isfinite(prob.upper[i])) bounded = false;
              else support += prob.upper[i] * dy[i];
            } else if (dy[i] < 0.0) {
              if (!std::isfinite(prob.lower[i])) bounded = false;
              else support += prob.lower[i] * dy[i];
            }
          }
          if (bounded && inf_norm(prob.A.transpose() * dy) <= eps_inf * dy_norm &&
              support < -eps_inf * dy_norm) {
            sol.status = QpStatus::PrimalInfeasible;
            break;
          }
        }
        const VecX dx = x - x_prev;
        const double dx_norm = inf_norm(dx);
        if (dx_norm > 1e-12) {
          const VecX adx = prob.A * dx;
          bool cone_ok = true;
          for (int i = 0; i < m; ++i) {
            if (std::isfinite(prob.upper[i]) && adx[i] > eps_inf * dx_norm) cone_ok = false;
            if (std::isfinite(prob.lower[i]) && adx[i] < -eps_inf * dx_norm) cone_ok = false;
          }
          if (cone_ok && inf_norm(prob.P * dx) <= eps_inf * dx_norm &&
              prob.q.dot(dx) < -eps_inf * dx_norm) {
            sol.status = QpStatus::DualInfeasible;
            break;
          }
        }
      }

      if (st.adaptive_rho && iter % (st.check_interval * 8) == 0 && m > 0) {
        const double num = rp / std::max(1e-12, std::max(inf_norm(ax), inf_norm(z)));
        const double den = rd / std::max(1e-12, std::max(inf_norm(px), inf_norm(aty)));
        const double ratio = std::sqrt(num / std::max(den, 1e-16));
        if (ratio > 5.0 || ratio < 0.2) {
          rho = std::clamp(rho * ratio, 1e-6, 1e6);
          fill_rho(rho);
          factor();
        }
      }
    }
  }

  sol.x = x;
  sol.y = y;
  sol.z = z;
  sol.iterations = std::min(iter, st.max_iters);
  if (sol.status == QpStatus::Solved && st.polish && m > 0) {
    polish(prob, sol.x, sol.y, rp, rd);
    sol.z = prob.A * sol.x;
  }
  sol.primal_residual = rp;
  sol.dual_residual = rd;
  return sol;
}

}  // namespace quadpong::opt
