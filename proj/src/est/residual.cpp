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

#include "quadpong/est/residual.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace quadpong::est {

using nlohmann::json;

Vec3 ResidualModel::predict_delta(const VecX& raw_features) const {
  if (raw_features.size() != net.input_size()) {
    throw DimensionMismatch("ResidualModel: feature length " +
                            std::to_string(raw_features.size()) +
                            " does not match network input " +
                            std::to_string(net.input_size()));
  }
  const VecX normalized =
      (raw_features - feat_mean).cwiseQuotient(feat_std);
  return net.forward(normalized);
}

SpinEstimate apply_residual(const ResidualModel& model, const SpinEstimate& spin,
                            const PolyFit& fit) {
  SpinEstimate out = spin;
  out.omega_corrected = spin.omega_lsq + model.predict_delta(featurize(spin.omega_lsq, fit));
  out.corrected = true;
  return out;
}

namespace {

json vec_to_json(const VecX& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

VecX vec_from_json(const json& a) {
  VecX v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v[i] = a[i].get<double>();
  return v;
}

}  // namespace

std::string ResidualModel::to_json() const {
  json j;
  j["format"] = "quadpong-residual-1";
  j["degree"] = degree;
  j["config_hash"] = config_hash;
  j["feat_mean"] = vec_to_json(feat_mean);
  j["feat_std"] = vec_to_json(feat_std);
  j["layers"] = json::array();
  for (int l = 0; l < net.num_layers(); ++l) {
    json layer;
    layer["rows"] = net.W[l].rows();
    layer["cols"] = net.W[l].cols();
    json w = json::array();
    for (int r = 0; r < net.W[l].rows(); ++r)
      for (int c = 0; c < net.W[l].cols(); ++c) w.push_back(net.W[l](r, c));
    layer["W"] = std::move(w);
    layer["b"] = vec_to_json(net.b[l]);
    j["layers"].push_back(std::move(layer));
  }
  return j.dump();
}

ResidualModel ResidualModel::from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.value("format", "") != "quadpong-residual-1") {
    throw std::runtime_error("ResidualModel: unknown file format");
  }
  ResidualModel m;
  m.degree = j.at("degree").get<int>();
  m.config_hash = j.value("config_hash", "");
  m.feat_mean = vec_from_json(j.at("feat_mean"));
  m.feat_std = vec_from_json(j.at("feat_std"));
  for (const auto& layer : j.at("layers")) {
    const int rows = layer.at("rows").get<int>();
    const int cols = layer.at("cols").get<int>();
    MatX W(rows, cols);
    const auto& w = layer.at("W");
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) W(r, c) = w[r * cols + c].get<double>();
    m.net.W.push_back(std::move(W));
    m.net.b.push_back(vec_from_json(layer.at("b")));
  }
  // Layer dimensions must chain.
  for (int l = 1; l < m.net.num_layers(); ++l) {
    if (m.net.W[l].cols() != m.net.W[l - 1].rows()) {
      throw std::runtime_error("ResidualModel: layer dimensions do not chain");
    }
  }
  return m;
}

void ResidualModel::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write model: " + path);
  f << to_json();
}

ResidualModel ResidualModel::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open model: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_json(ss.str());
}

double r_squared(const std::vector<Vec3>& truth, const std::vector<Vec3>& pred) {
  Vec3 mean = Vec3::Zero();
  for (const auto& t : truth) mean += t;
  mean /= static_cast<double>(truth.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (size_t i = 0; i < truth.size(); ++i) {
    ss_res += (truth[i] - pred[i]).squaredNorm();
    ss_tot += (truth[i] - mean).squaredNorm();
  }
  return 1.0 - ss_res / std::max(ss_tot, 1e-12);
}

ResidualModel train_residual(const std::vector<TrainSample>& samples,
                             const TrainConfig& config, TrainReport* report) {
  if (samples.size() < 100) {
    throw std::invalid_argument("train_residual: need at least 100 samples");
  }
  const int nf = static_cast<int>(samples.front().features.size());

  Rng rng(config.seed);

  // Seeded shuffle, then holdout split from the tail.
  std::vector<int> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) {
    std::swap(order[i], order[rng.uniform_int(0, i)]);
  }
  const int n_holdout =
      std::max(1, static_cast<int>(config.holdout_frac * samples.size()));
  const int n_train = static_cast<int>(samples.size()) - n_holdout;

  // Normalization constants from the training split.
  ResidualModel model;
  model.degree = (nf - 4) / 3 - 1;
  model.feat_mean = VecX::Zero(nf);
  model.feat_std = VecX::Zero(nf);
  for (int i = 0; i < n_train; ++i) model.feat_mean += samples[order[i]].features;
  model.feat_mean /= n_train;
  for (int i = 0; i < n_train; ++i) {
    const VecX d = samples[order[i]].features - model.feat_mean;
    model.feat_std += d.cwiseProduct(d);
  }
  model.feat_std = (model.feat_std / n_train).cwiseSqrt().cwiseMax(1e-9);

  std::vector<int> sizes;
  sizes.push_back(nf);
  for (const int h : config.hidden) sizes.push_back(h);
  sizes.push_back(3);
  model.net = Mlp::create(sizes, rng);

  {
    std::ostringstream h;
    h << "layers=";
    for (const int s : sizes) h << s << ',';
    h << " epochs=" << config.epochs << " batch=" << config.batch
      << " lr=" << config.lr << " seed=" << config.seed
      << " holdout=" << config.holdout_frac << " n=" << samples.size();
    model.config_hash = h.str();
  }

  // Adam state.
  const int L = model.net.num_layers();
  std::vector<MatX> mW(L), vW(L), gW(L);
  std::vector<VecX> mb(L), vb(L), gb(L);
  for (int l = 0; l < L; ++l) {
    mW[l] = MatX::Zero(model.net.W[l].rows(), model.net.W[l].cols());
    vW[l] = mW[l];
    gW[l] = mW[l];
    mb[l] = VecX::Zero(model.net.b[l].size());
    vb[l] = mb[l];
    gb[l] = mb[l];
  }

  std::vector<int> train_idx(order.begin(), order.begin() + n_train);
  double last_epoch_loss = 0.0;
  long step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (int i = n_train - 1; i > 0; --i) {
      std::swap(train_idx[i], train_idx[rng.uniform_int(0, i)]);
    }
    double epoch_loss = 0.0;
    for (int start = 0; start < n_train; start += config.batch) {
      const int count = std::min(config.batch, n_train - start);
      for (int l = 0; l < L; ++l) {
        gW[l].setZero();
        gb[l].setZero();
      }
      double batch_loss = 0.0;
      for (int k = 0; k < count; ++k) {
        const TrainSample& s = samples[train_idx[start + k]];
        const VecX in = (s.features - model.feat_mean).cwiseQuotient(model.feat_std);
        const Vec3 target = s.omega_true - s.omega_lsq;
        batch_loss += model.net.loss_and_grad(in, target, gW, gb);
      }
      if (!std::isfinite(batch_loss)) {
        throw NonFiniteLoss("train_residual: loss diverged at epoch " +
                            std::to_string(epoch));
      }
      epoch_loss += batch_loss;
      ++step;
      const double bc1 = 1.0 - std::pow(config.beta1, step);
      const double bc2 = 1.0 - std::pow(config.beta2, step);
      for (int l = 0; l < L; ++l) {
        gW[l] /= count;
        gb[l] /= count;
        mW[l] = config.beta1 * mW[l] + (1 - config.beta1) * gW[l];
        vW[l] = config.beta2 * vW[l] + (1 - config.beta2) * gW[l].cwiseProduct(gW[l]);
        mb[l] = config.beta1 * mb[l] + (1 - config.beta1) * gb[l];
        vb[l] = config.beta2 * vb[l] + (1 - config.beta2) * gb[l].cwiseProduct(gb[l]);
        model.net.W[l] -= config.lr *
                          (mW[l] / bc1)
                              .cwiseQuotient((vW[l] / bc2).cwiseSqrt().array()
                                                 .max(config.adam_eps)
                                                 .matrix());
        model.net.b[l] -= config.lr *
                          (mb[l] / bc1)
                              .cwiseQuotient((vb[l] / bc2).cwiseSqrt().array()
                                                 .max(config.adam_eps)
                                                 .matrix());
      }
    }
    last_epoch_loss = epoch_loss / n_train;
  }

  if (report) {
    report->n_train = n_train;
    report->n_holdout = n_holdout;
    report->final_train_loss = last_epoch_loss;
    std::vector<Vec3> truth, base, corr;
    for (int i = n_train; i < static_cast<int>(samples.size()); ++i) {
      const TrainSample& s = samples[order[i]];
      truth.push_back(s.omega_true);
      base.push_back(s.omega_lsq);
      corr.push_back(s.omega_lsq + model.predict_delta(s.features));
    }
    report->r2_baseline = r_squared(truth, base);
    report->r2_corrected = r_squared(truth, corr);
  }
  return model;
}

}  // namespace quadpong::est
