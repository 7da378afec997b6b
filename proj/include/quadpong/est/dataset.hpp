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
#include <vector>

#include "quadpong/est/residual.hpp"

namespace quadpong::est {

/// One stored trajectory: detection track plus the spin that generated it.
/// The track ends where the estimator should be evaluated.
struct TrackRecord {
  std::vector<Detection> track;
  Vec3 omega_true{Vec3::Zero()};
};

/// JSON-lines dataset: one {"track":[{"t","x","y","z"}...],
/// "omega_true":[wx,wy,wz]} object per line.
void write_dataset(const std::string& path, const std::vector<TrackRecord>& records);
std::vector<TrackRecord> read_dataset(const std::string& path);

/// Rotates a record about the world z-axis (positions and spin together).
TrackRecord rotate_record_z(const TrackRecord& rec, double angle);

/// Runs the model-based half of the pipeline on each record to produce
/// training samples; records whose fit or spin solve fails are skipped.
std::vector<TrainSample> build_training_samples(
    const std::vector<TrackRecord>& records, int degree, double window,
    int grid_points, const ball::AeroParams& aero);

}  // namespace quadpong::est
