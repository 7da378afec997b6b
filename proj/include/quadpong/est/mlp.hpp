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

#include <vector>

#include "quadpong/core/rng.hpp"
#include "quadpong/core/types.hpp"

namespace quadpong::est {

/// Small fully connected network: tanh hidden layers, linear output.
class Mlp {
 public:
  std::vector<MatX> W;
  std::vector<VecX> b;

  static Mlp create(const std::vector<int>& layer_sizes, Rng& rng);

  int input_size() const { return W.empty() ? 0 : static_cast<int>(W.front().cols()); }
  int output_size() const { return W.empty() ? 0 : static_cast<int>(W.back().rows()); }
  int num_layers() const { return static_cast<int>(W.size()); }

  VecX forward(const VecX& in) const;

  /// Squared-error loss 0.5*||f(in) - target||^2 with gradient accumulation
  /// into (gW, gb), which must match the layer shapes.
  double loss_and_grad(const VecX& in, const VecX& target,
                       std::vector<MatX>& gW, std::vector<VecX>& gb) const;

  std::vector<int> layer_sizes() const;
};

}  // namespace quadpong::est
