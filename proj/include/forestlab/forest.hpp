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

#include <cmath>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "forestlab/tree.hpp"

namespace forestlab {

struct ForestConfig {
  Index n_trees = 1;
  GrowConfig grow;
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

/// Convex combination of decision trees. Weights are kept in [0,1] and sum
/// to 1; Random Forest training produces uniform 1/M weights.
struct Forest {
  std::vector<DecisionTree> trees;
  std::vector<double> weights;

  Index size() const { return static_cast<Index>(trees.size()); }
  bool uniform_weights(double tol = 1e-12) const;
  void validate() const;

  nlohmann::json to_json() const;
  static Forest from_json(const nlohmann::json& doc);
};

/// n i.i.d. uniform draws with replacement from [0, n).
IndexVector bootstrap_sample(Index n, Rng& rng);

/// Trains M trees on independent bootstrap draws of the sample (or on the
/// sample itself when bootstrap is off), each with per-node feature
/// subsampling, and weights them 1/M. Per-tree RNG streams derive from the
/// seeds by tree index, so the result does not depend on scheduling.
Forest train_rf(const Dataset& ds, const IndexVector& sample,
                const ForestConfig& cfg);

/// Weighted average of member prediction vectors.
Vector predict(const Forest& f, const Eigen::Ref<const RowVector>& x);

/// p(class 1) - p(class 0), clamped to [-1, 1]. Two-class models only.
double binary_score(const Forest& f, const Eigen::Ref<const RowVector>& x);
double binary_score(const DecisionTree& t, const Eigen::Ref<const RowVector>& x);

/// 0-1 error under the argmax rule, ties toward the lower class index.
double error_01(const Forest& f, const Dataset& ds, const IndexVector& idx);
double error_01(const DecisionTree& t, const Dataset& ds, const IndexVector& idx);

/// Default feature budget ceil(sqrt(d)).
inline Index sqrt_feature_budget(Index d) {
  return static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(d))));
}

}  // namespace forestlab
