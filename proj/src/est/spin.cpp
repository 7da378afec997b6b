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

#include "quadpong/est/spin.hpp"

#include <Eigen/SVD>

namespace quadpong::est {

SpinEstimate estimate_spin_lsq(const VelocityGrid& grid,
                               const ball::AeroParams& params) {
  const int n = static_cast<int>(grid.v.size());
  if (n < 3) throw InsufficientPoints("estimate_spin_lsq: need >= 3 velocity samples");

  MatX A(3 * (n - 1), 3);
  VecX b(3 * (n - 1));
  for (int i = 0; i + 1 < n; ++i) {
    // The forward difference equals the derivative at the interval midpoint
    // to second order, so the drag and Magnus terms are evaluated there.
    const Vec3 v = 0.5 * (grid.v[i] + grid.v[i + 1]);
    const double dt = grid.t[i + 1] - grid.t[i];
    const Vec3 dv = (grid.v[i + 1] - grid.v[i]) / dt;
    // dv = -c_d |v| v + c_m (w x v) + g  =>  -c_m [v]x w = dv + c_d |v| v - g
    A.middleRows<3>(3 * i) = -params.c_magnus * skew(v);
    b.segment<3>(3 * i) = dv + params.c_drag * v.norm() * v - params.gravity;
  }

  Eigen::JacobiSVD<MatX> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(2);
  if (smin < 1e-9 * std::max(smax, 1e-12)) {
    throw SingularSystem(
        "estimate_spin_lsq: collinear velocity samples, spin component along "
        "the track is unidentifiable");
  }

  SpinEstimate est;
  est.omega_lsq = svd.solve(b);
  est.omega_corrected = est.omega_lsq;
  est.condition_number = smax / smin;
  est.n_points = n;
  return est;
}

VecX featurize(const Vec3& omega_lsq, const PolyFit& fit) {
  const int d = fit.degree;
  VecX f(feature_length(d));
  f.head<3>() = omega_lsq;
  for (int a = 0; a < 3; ++a) {
    f.segment(3 + a * (d + 1), d + 1) = fit.coeffs.row(a).transpose();
  }
  f[f.size() - 1] = fit.span();
  return f;
}

}  // namespace quadpong::est
