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

#include <functional>

#include "forestlab/forest.hpp"

namespace forestlab {

struct AugmentConfig {
  Index copies = 10;      // T
  double noise = 0.01;    // Gaussian standard deviation
  std::uint64_t seed = 0;
};

/// Class scorer: maps a feature row to a per-class score vector. Hard labels
/// are taken as the argmax (ties to the lower class index).
using Scorer = std::function<Vector(const Eigen::Ref<const RowVector>&)>;

Scorer scorer_of(const Forest& f);
Scorer scorer_of(const DecisionTree& t);

/// The selected rows with their true labels, followed by T noisy copies of
/// their features labeled by the teacher's hard predictions. Noise is i.i.d.
/// Gaussian per cell, applied to every encoded column. Output size is
/// (T + 1) * |idx| rows.
Dataset augment(const Dataset& ds, const IndexVector& idx, const Scorer& teacher,
                const AugmentConfig& cfg);

/// Trains a Random Forest teacher on idx, then grows a single tree on the
/// augmented set.
DecisionTree train_da_dt(const Dataset& ds, const IndexVector& idx,
                         const ForestConfig& teacher_cfg,
                         const GrowConfig& student_cfg,
                         const AugmentConfig& aug);

/// Trains a single-tree teacher on idx, then a Random Forest student on the
/// augmented set.
Forest train_da_rf(const Dataset& ds, const IndexVector& idx,
                   const GrowConfig& teacher_cfg,
                   const ForestConfig& student_cfg,
                   const AugmentConfig& aug);

}  // namespace forestlab
