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

#include "quadpong/est/polyfit.hpp"

#include <Eigen/QR>

namespace quadpong::est {

namespace {

Vec3 eval_poly(const MatX& coeffs, double dt, int deriv) {
  Vec3 out = Vec3::Zero();
  const int n = static_cast<int>(coeffs.cols());
  for (int k = deriv; k < n; ++k) {
    double factor = 1.0;
    for (int d = 0; d < deriv; ++d) factor *= (k - d);
    out += coeffs.col(k) * factor * std::pow(dt, k - deriv);
  }
  return out;
}

}  // namespace

Vec3 PolyFit::position(double t) const { return eval_poly(coeffs, t - t_ref, 0); }
Vec3 PolyFit::velocity(double t) const { return eval_poly(coeffs, t - t_ref, 1); }
Vec3 PolyFit::acceleration(double t) const { return eval_poly(coeffs, t - t_ref, 2); }

PolyFit fit_velocity(std::span<const Detection> track, int degree, double window) {
  if (track.empty()) throw InsufficientPoints("fit_velocity: empty track");
  const double t_end = track.back().t;
  size_t first = 0;
  while (first < track.size() && track[first].t < t_end - window) ++first;
  const size_t n = track.size() - first;
  if (static_cast<int>(n) < degree + 2) {
    throw InsufficientPoints("fit_velocity: need at least degree+2 points in window");
  }
  for (size_t i = first + 1; i < track.size(); ++i) {
    if (!(track[i].t > track[i - 1].t)) {
      throw std::invalid_argument("fit_velocity: timestamps not strictly increasing");
    }
  }
  const double span = t_end - track[first].t;
  if (span < 0.010) throw DegenerateTimeBase("fit_velocity: window span < 10 ms");

  MatX V(n, degree + 1);
  MatX rhs(n, 3);
  for (size_t i = 0; i < n; ++i) {
    const double dt = track[first + i].t - t_end;
    double p = 1.0;
    for (int k = 0; k <= degree; ++k) {
      V(i, k) = p;
      p *= dt;
    }
    rhs.row(i) = track[first + i].p.transpose();
  }
  const MatX sol = V.colPivHouseholderQr().solve(rhs);  // (degree+1) x 3

  PolyFit fit;
  fit.degree = degree;
  fit.t0 = track[first].t;
  fit.t1 = t_end;
  fit.t_ref = t_end;
  fit.coeffs = sol.transpose();
  const MatX resid = V * sol - rhs;
  for (int a = 0; a < 3; ++a) {
    fit.rms[a] = std::sqrt(resid.col(a).squaredNorm() / static_cast<double>(n));
  }
  return fit;
}

VelocityGrid velocity_grid(const PolyFit& fit, int grid_points) {
  VelocityGrid g;
  g.t.resize(grid_points);
  g.v.resize(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    const double t =
        fit.t0 + (fit.t1 - fit.t0) * i / static_cast<double>(grid_points - 1);
    g.t[i] = t;
    g.v[i] = fit.velocity(t);
  }
  return g;
}

}  // namespace quadpong::est
