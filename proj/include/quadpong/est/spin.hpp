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

#include "quadpong/ball/types.hpp"
#include "quadpong/est/polyfit.hpp"

namespace quadpong::est {

struct SpinEstimate {
  Vec3 omega_lsq{Vec3::Zero()};
  Vec3 omega_corrected{Vec3::Zero()};
  double condition_number{1.0};
  int n_points{0};
  bool corrected{false};
};

/// Spin from stacked finite-difference aerodynamics rows: each velocity
/// sample pair contributes  -c_magnus [v_i]x w = dv/dt + c_drag|v_i|v_i - g.
/// Solved by QR; throws SingularSystem when the rows are rank deficient
/// (collinear velocities leave the along-track component unidentifiable).
SpinEstimate estimate_spin_lsq(const VelocityGrid& grid,
                               const ball::AeroParams& params);

/// Deterministic feature vector for the residual corrector:
/// [omega_lsq (3); per-axis polynomial coefficients (3*(degree+1));
///  window span] -- 16 entries at degree 3. Unnormalized.
VecX featurize(const Vec3& omega_lsq, const PolyFit& fit);

inline int feature_length(int degree) { return 3 + 3 * (degree + 1) + 1; }

}  // namespace quadpong::est
