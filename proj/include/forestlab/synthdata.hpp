// Copyright 2026 The forestlab authors
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

#include "forestlab/dataio.hpp"

namespace forestlab {

/// Gaussian-mixture classification data with optional label-flip noise.
/// Cluster centers are drawn uniformly in [0,1]^d per class; rows sample a
/// cluster and add isotropic noise. flip_fraction of the labels are flipped
/// to make saturated trees memorize wrong labels.
struct SynthSpec {
  std::string name;
  Index rows = 1000;
  Index numeric_features = 8;
  Index clusters_per_class = 4;
  double cluster_sigma = 0.15;
  double flip_fraction = 0.0;
  double class1_fraction = 0.5;
  std::vector<std::string> class_names = {"a", "b"};
  Index categorical_values = 0;  // adds one categorical column when > 0
  std::uint64_t seed = 1;
};

/// Bundled generator presets: "magic" and "eeg" mimic the size and noise
/// character of the telescope and eye-state benchmarks; "tiny" is a small
/// mixed-type table for smoke tests.
SynthSpec synth_preset(const std::string& kind, std::uint64_t seed);

RawTable synth_table(const SynthSpec& spec);

std::string to_csv(const RawTable& table);

/// Writes <name>.csv per preset plus a manifest.json into dir; returns the
/// manifest path.
std::string write_datasets(const std::string& dir,
                           const std::vector<std::string>& kinds,
                           std::uint64_t seed);

}  // namespace forestlab
