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

#include <optional>

#include "quadpong/ball/flight.hpp"
#include "quadpong/est/residual.hpp"

namespace quadpong::est {

enum class SpinMode { None, Lsq, Residual };

struct PredictorConfig {
  int degree{3};
  double window{0.30};      // s
  int grid_points{12};
  int min_points{8};        // velocity/position gate
  int spin_gate{30};        // detections required before spin is estimated
  double max_flight_time{2.5};
  ball::AeroParams aero{};
  ball::FlightEnv env{};
  ball::StrikePlane plane{};
  SpinMode mode{SpinMode::Residual};
};

struct StrikePrediction {
  ball::BallState at_plane;     // predicted crossing state (spin = estimate)
  double t_arrival{0.0};        // absolute time of the crossing
  SpinEstimate spin;
  PolyFit fit;
  double uncertainty{0.0};      // fit residual RMS, a noise proxy
  int n_points{0};
  int bounces_ahead{0};
};

enum class PredictFailure {
  TooFewPoints,
  DegenerateWindow,
  SingularSpin,
  NoArrival,
};

/// Full prediction pipeline: polynomial velocity fit, stacked least-squares
/// spin (gated, optionally residual-corrected), then flight integration with
/// bounce events to the strike plane. Spin is held at zero before the gate.
class StrikePredictor {
 public:
  StrikePredictor(const PredictorConfig& config, const ResidualModel* model)
      : config_(config), model_(model) {}

  std::optional<StrikePrediction> predict(std::span<const Detection> track,
                                          PredictFailure* why = nullptr) const;

  const PredictorConfig& config() const { return config_; }

 private:
  PredictorConfig config_;
  const ResidualModel* model_;  // required for SpinMode::Residual
};

}  // namespace quadpong::est
