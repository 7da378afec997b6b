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

#include <span>
#include <stdexcept>
#include <vector>

#include "quadpong/core/types.hpp"

namespace quadpong::est {

/// One stereo ball detection (produced synthetically here).
struct Detection {
  double t{0.0};
  Vec3 p{Vec3::Zero()};
  int camera_id{0};
};

struct InsufficientPoints : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateTimeBase : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Per-axis polynomial fit over a trailing time window. Times are shifted to
/// t_ref (the newest sample) before fitting for conditioning.
struct PolyFit {
  int degree{3};
  double t0{0.0}, t1{0.0};  // fit window
  double t_ref{0.0};
  MatX coeffs;  // 3 x (degree+1), ascending powers of (t - t_ref)
  Vec3 rms{Vec3::Zero()};  // per-axis residual

  Vec3 position(double t) const;
  Vec3 velocity(double t) const;
  Vec3 acceleration(double t) const;
  double span() const { return t1 - t0; }
};

/// Least-squares fit over detections inside the trailing `window` seconds.
/// Throws InsufficientPoints (< degree + 2 points) or DegenerateTimeBase
/// (span < 10 ms). Timestamps must be strictly increasing.
PolyFit fit_velocity(std::span<const Detection> track, int degree, double window);

struct VelocityGrid {
  std::vector<double> t;
  std::vector<Vec3> v;
};

/// Analytic fit derivatives sampled on a uniform grid of G points spanning
/// the fit window.
VelocityGrid velocity_grid(const PolyFit& fit, int grid_points);

}  // namespace quadpong::est
