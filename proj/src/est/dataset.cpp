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

#include "quadpong/est/dataset.hpp"

#include <json.hpp>

#include <fstream>

namespace quadpong::est {

using nlohmann::json;

void write_dataset(const std::string& path, const std::vector<TrackRecord>& records) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write dataset: " + path);
  for (const auto& rec : records) {
    json j;
    json track = json::array();
    for (const auto& d : rec.track) {
      track.push_back({{"t", d.t}, {"x", d.p.x()}, {"y", d.p.y()}, {"z", d.p.z()}});
    }
    j["track"] = std::move(track);
    j["omega_true"] = {rec.omega_true.x(), rec.omega_true.y(), rec.omega_true.z()};
    f << j.dump() << '\n';
  }
}

std::vector<TrackRecord> read_dataset(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open dataset: " + path);
  std::vector<TrackRecord> records;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    TrackRecord rec;
    for (const auto& d : j.at("track")) {
      Detection det;
      det.t = d.at("t").get<double>();
      det.p = Vec3(d.at("x").get<double>(), d.at("y").get<double>(),
                   d.at("z").get<double>());
      rec.track.push_back(det);
    }
    const auto& w = j.at("omega_true");
    rec.omega_true = Vec3(w[0].get<double>(), w[1].get<double>(), w[2].get<double>());
    records.push_back(std::move(rec));
  }
  return records;
}

TrackRecord rotate_record_z(const TrackRecord& rec, double angle) {
  const Mat3 R = rot_z(angle);
  TrackRecord out = rec;
  for (auto& d : out.track) d.p = R * d.p;
  out.omega_true = R * rec.omega_true;
  return out;
}

std::vector<TrainSample> build_training_samples(
    const std::vector<TrackRecord>& records, int degree, double window,
    int grid_points, const ball::AeroParams& aero) {
  std::vector<TrainSample> samples;
  samples.reserve(records.size());
  for (const auto& rec : records) {
    try {
      const PolyFit fit = fit_velocity(rec.track, degree, window);
      const SpinEstimate spin =
          estimate_spin_lsq(velocity_grid(fit, grid_points), aero);
      TrainSample s;
      s.features = featurize(spin.omega_lsq, fit);
      s.omega_lsq = spin.omega_lsq;
      s.omega_true = rec.omega_true;
      samples.push_back(std::move(s));
    } catch (const std::runtime_error&) {
      continue;  // degenerate track, skip
    }
  }
  return samples;
}

}  // namespace quadpong::est
