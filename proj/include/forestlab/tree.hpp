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

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "forestlab/dataio.hpp"
#include "forestlab/types.hpp"

namespace forestlab {

/// Axis-aligned split: routes x left iff x[feature] <= threshold.
struct Split {
  Index feature = -1;
  double threshold = 0.0;
};

/// Node of a decision tree stored in a flat array. Leaves carry a constant
/// prediction vector and their leaf ordinal; inner nodes carry a split and
/// child indices.
struct TreeNode {
  Split split;
  int left = -1;
  int right = -1;
  int leaf_ordinal = -1;
  Vector prediction;

  bool is_leaf() const { return left < 0; }
};

struct GrowConfig {
  Index max_leaf_nodes = 2;
  Index feature_sample_size = 0;  // 0 means all features
  Index min_samples_leaf = 1;
  std::uint64_t seed = 0;
};

/// Gini impurity of a class-count vector: 1 - sum_c p_c^2.
template <typename Derived>
double gini(const Eigen::MatrixBase<Derived>& counts) {
  const double total = counts.sum();
  if (counts.size() == 0 || total <= 0.0)
    throw std::invalid_argument("gini: empty node");
  double sum_sq = 0.0;
  for (Index c = 0; c < counts.size(); ++c) {
    const double p = counts[c] / total;
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

struct SplitCandidate {
  Split split;
  double impurity_decrease = 0.0;
};

/// Best axis-aligned split of the given samples over the given feature
/// subset. Thresholds are midpoints between consecutive distinct sorted
/// values; the returned decrease is gini(parent) minus the sample-weighted
/// child gini. Returns nullopt when no split with positive decrease exists
/// (for min_samples_leaf = 1; larger values also reject small children).
std::optional<SplitCandidate> best_split(const Dataset& ds,
                                         const IndexVector& samples,
                                         const IndexVector& features,
                                         Index min_samples_leaf = 1);

class DecisionTree {
 public:
  DecisionTree() = default;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  Index n_nodes() const { return static_cast<Index>(nodes_.size()); }
  Index n_leaves() const { return n_leaves_; }
  Index height() const { return height_; }
  Index d_used() const { return d_used_; }
  Index dim() const { return dim_; }
  Index classes() const { return classes_; }

  /// Prediction vector of the leaf reached by x (<= routes left).
  Vector predict_proba(const Eigen::Ref<const RowVector>& x) const;

  /// Ordinal (in [0, n_leaves)) of the leaf reached by x.
  Index leaf_index(const Eigen::Ref<const RowVector>& x) const;

  /// Leaf prediction access by ordinal; set_leaf_value leaves the tree
  /// structure untouched.
  const Vector& leaf_value(Index leaf) const;
  void set_leaf_value(Index leaf, const Vector& value);

  nlohmann::json to_json() const;
  static DecisionTree from_json(const nlohmann::json& doc);

  friend DecisionTree grow_tree(const Dataset& ds, const IndexVector& sample,
                                const GrowConfig& cfg);

 private:
  int node_of(const Eigen::Ref<const RowVector>& x) const;

  std::vector<TreeNode> nodes_;
  std::vector<int> leaf_nodes_;  // leaf ordinal -> node index
  Index n_leaves_ = 0;
  Index height_ = 0;
  Index d_used_ = 0;
  Index dim_ = 0;
  Index classes_ = 0;
};

/// Grows a tree on the given sample (a multiset of row indices) with
/// best-first expansion: the frontier leaf whose best split has the greatest
/// impurity decrease is expanded next, ties broken by lower node-creation
/// index. Feature subsets are re-drawn at every node. Growth stops at
/// max_leaf_nodes or when no leaf admits a positive-decrease split.
DecisionTree grow_tree(const Dataset& ds, const IndexVector& sample,
                       const GrowConfig& cfg);

}  // namespace forestlab
