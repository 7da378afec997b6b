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

#include "quadpong/est/predictor.hpp"

namespace quadpong::est {

std::optional<StrikePrediction> StrikePredictor::predict(
    std::span<const Detection> track, PredictFailure* why) const {
  auto fail = [&](PredictFailure f) -> std::optional<StrikePrediction> {
    if (why) *why = f;
    return std::nullopt;
  };

  if (static_cast<int>(track.size()) < config_.min_points) {
    return fail(PredictFailure::TooFewPoints);
  }

  StrikePrediction pred;
  pred.n_points = static_cast<int>(track.size());
  try {
    pred.fit = fit_velocity(track, config_.degree, config_.window);
  } catch (const InsufficientPoints&) {
    return fail(PredictFailure::TooFewPoints);
  } catch (const DegenerateTimeBase&) {
    return fail(PredictFailure::DegenerateWindow);
  }

  pred.spin = SpinEstimate{};
  if (config_.mode != SpinMode::None &&
      static_cast<int>(track.size()) >= config_.spin_gate) {
    try {
      pred.spin = estimate_spin_lsq(velocity_grid(pred.fit, config_.grid_points),
                                    config_.aero);
      if (config_.mode == SpinMode::Residual && model_ != nullptr) {
        pred.spin = apply_residual(*model_, pred.spin, pred.fit);
      }
    } catch (const SingularSystem&) {
      pred.spin = SpinEstimate{};  // fall back to zero spin, keep predicting
    }
  }

  const double t_now = track.back().t;
  ball::BallState current;
  current.r = pred.fit.position(t_now);
  current.v = pred.fit.velocity(t_now);
  current.w = config_.mode == SpinMode::Residual && pred.spin.corrected
                  ? pred.spin.omega_corrected
                  : pred.spin.omega_lsq;
  current.t = t_now;

  ball::FlightOptions opts;
  opts.max_time = config_.max_flight_time;
  const auto arrival = ball::integrate_to_plane(current, config_.plane,
                                                config_.aero, config_.env, opts);
  if (!arrival) return fail(PredictFailure::NoArrival);

  pred.at_plane = arrival->state;
  pred.t_arrival = arrival->state.t;
  pred.bounces_ahead = arrival->bounce_count;
  pred.uncertainty = pred.fit.rms.norm();
  return pred;
}

}  // namespace quadpong::est
