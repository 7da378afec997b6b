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

#include <string>

#include "quadpong/est/mlp.hpp"
#include "quadpong/est/spin.hpp"

namespace quadpong::est {

struct NonFiniteLoss : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Learned corrector predicting delta omega = omega_true - omega_lsq from
/// normalized features.
struct ResidualModel {
  Mlp net;
  VecX feat_mean;
  VecX feat_std;
  int degree{3};
  std::string config_hash;

  Vec3 predict_delta(const VecX& raw_features) const;

  std::string to_json() const;
  static ResidualModel from_json(const std::string& text);
  void save(const std::string& path) const;
  static ResidualModel load(const std::string& path);
};

/// omega_corrected = omega_lsq + net(featurize(omega_lsq, fit)).
/// Throws DimensionMismatch when the model and feature layout disagree.
SpinEstimate apply_residual(const ResidualModel& model, const SpinEstimate& spin,
                            const PolyFit& fit);

struct TrainSample {
  VecX features;     // raw (unnormalized) featurize output
  Vec3 omega_lsq;
  Vec3 omega_true;
};

struct TrainConfig {
  std::vector<int> hidden{64, 64};
  int epochs{200};
  int batch{32};
  double lr{1e-3};
  double beta1{0.9};
  double beta2{0.999};
  double adam_eps{1e-8};
  double holdout_frac{0.2};
  uint64_t seed{1};
};

struct TrainReport {
  double r2_baseline{0.0};     // holdout R^2 of omega_lsq alone
  double r2_corrected{0.0};    // holdout R^2 after the learned correction
  double final_train_loss{0.0};
  int n_train{0};
  int n_holdout{0};
};

/// Minibatch Adam on the delta-spin regression; seeded and reproducible.
/// Requires >= 100 samples; throws NonFiniteLoss on divergence.
ResidualModel train_residual(const std::vector<TrainSample>& samples,
                             const TrainConfig& config, TrainReport* report);

/// Pooled multi-output R^2 of predictions against targets.
double r_squared(const std::vector<Vec3>& truth, const std::vector<Vec3>& pred);

}  // namespace quadpong::est
