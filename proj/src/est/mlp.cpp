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

#include "quadpong/est/mlp.hpp"

namespace quadpong::est {

Mlp Mlp::create(const std::vector<int>& layer_sizes, Rng& rng) {
  Mlp net;
  for (size_t i = 0; i + 1 < layer_sizes.size(); ++i) {
    const int fan_in = layer_sizes[i];
    const int fan_out = layer_sizes[i + 1];
    const double scale = std::sqrt(1.0 / fan_in);
    MatX W(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r)
      for (int c = 0; c < fan_in; ++c) W(r, c) = rng.normal(0.0, scale);
    net.W.push_back(std::move(W));
    net.b.push_back(VecX::Zero(fan_out));
  }
  return net;
}

std::vector<int> Mlp::layer_sizes() const {
  std::vector<int> sizes;
  if (W.empty()) return sizes;
  sizes.push_back(static_cast<int>(W.front().cols()));
  for (const auto& w : W) sizes.push_back(static_cast<int>(w.rows()));
  return sizes;
}

VecX Mlp::forward(const VecX& in) const {
  VecX a = in;
  for (int l = 0; l < num_layers(); ++l) {
    a = W[l] * a + b[l];
    if (l + 1 < num_layers()) a = a.array().tanh();
  }
  return a;
}

double Mlp::loss_and_grad(const VecX& in, const VecX& target,
                          std::vector<MatX>& gW, std::vector<VecX>& gb) const {
  const int L = num_layers();
  std::vector<VecX> acts(L + 1);  // post-activation per layer
  acts[0] = in;
  for (int l = 0; l < L; ++l) {
    acts[l + 1] = W[l] * acts[l] + b[l];
    if (l + 1 < L) acts[l + 1] = acts[l + 1].array().tanh();
  }
  const VecX err = acts[L] - target;
  const double loss = 0.5 * err.squaredNorm();

  VecX delta = err;  // d loss / d pre-activation of the output layer
  for (int l = L - 1; l >= 0; --l) {
    gW[l].noalias() += delta * acts[l].transpose();
    gb[l] += delta;
    if (l > 0) {
      // tanh' = 1 - tanh^2, with acts[l] already the tanh output.
      delta = (W[l].transpose() * delta).cwiseProduct(
          (1.0 - acts[l].array().square()).matrix());
    }
  }
  return loss;
}

}  // namespace quadpong::est
