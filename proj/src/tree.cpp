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

#include "forestlab/tree.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace forestlab {

namespace {

std::vector<Index> class_counts(const Dataset& ds, const IndexVector& samples,
                                IndexVector::const_iterator begin,
                                IndexVector::const_iterator end) {
  std::vector<Index> counts(ds.classes(), 0);
  for (auto it = begin; it != end; ++it) ++counts[ds.label_of(*it)];
  return counts;
}

/// k distinct draws from [0, d) via partial Fisher-Yates.
IndexVector sample_features(Index d, Index k, Rng& rng) {
  IndexVector pool(d);
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < k; ++i) {
    std::uniform_int_distribution<Index> pick(i, d - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace

namespace {

std::optional<SplitCandidate> best_split_range(const Dataset& ds,
                                               IndexVector::const_iterator begin,
                                               IndexVector::const_iterator end,
                                               const IndexVector& features,
                                               Index min_samples_leaf) {
  const Index m = end - begin;
  if (m < 2 * min_samples_leaf || m < 2) return std::nullopt;

  const Index n_classes = ds.classes();
  std::vector<Index> total(n_classes, 0);
  for (auto it = begin; it != end; ++it) ++total[ds.label_of(*it)];

  double total_sumsq = 0.0;
  for (Index c = 0; c < n_classes; ++c)
    total_sumsq += double(total[c]) * double(total[c]);
  const double parent_gini = 1.0 - total_sumsq / (double(m) * double(m));

  std::vector<std::pair<double, int>> ordered(m);  // (value, label)
  std::vector<Index> left(n_classes);

  std::optional<SplitCandidate> best;
  double best_gain = 0.0;

  for (Index k : features) {
    for (Index j = 0; j < m; ++j) {
      const Index i = *(begin + j);
      ordered[j] = {ds.x()(i, k), static_cast<int>(ds.label_of(i))};
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (ordered.front().first == ordered.back().first) continue;

    std::fill(left.begin(), left.end(), Index{0});
    double left_sumsq = 0.0;
    double right_sumsq = total_sumsq;

    for (Index j = 0; j + 1 < m; ++j) {
      const int label = ordered[j].second;
      left_sumsq += 2.0 * double(left[label]) + 1.0;
      right_sumsq -= 2.0 * double(total[label] - left[label]) - 1.0;
      ++left[label];

      if (ordered[j].first == ordered[j + 1].first) continue;
      const Index nl = j + 1, nr = m - nl;
      if (nl < min_samples_leaf || nr < min_samples_leaf) continue;

      const double child =
          (double(m) - left_sumsq / double(nl) - right_sumsq / double(nr)) / double(m);
      const double gain = parent_gini - child;
      if (gain > best_gain) {
        best_gain = gain;
        best = SplitCandidate{
            Split{k, 0.5 * (ordered[j].first + ordered[j + 1].first)}, gain};
      }
    }
  }
  return best;
}

}  // namespace

std::optional<SplitCandidate> best_split(const Dataset& ds,
                                         const IndexVector& samples,
                                         const IndexVector& features,
                                         Index min_samples_leaf) {
  if (features.empty())
    throw std::invalid_argument("best_split: empty feature subset");
  return best_split_range(ds, samples.begin(), samples.end(), features,
                          min_samples_leaf);
}

namespace {

struct BuildNode {
  Index begin = 0;
  Index end = 0;
  Index depth = 0;
  std::optional<SplitCandidate> candidate;
};

struct FrontierEntry {
  double gain;
  int node;
};

struct FrontierOrder {
  // max-heap on gain; ties expand the earlier-created node first
  bool operator()(const FrontierEntry& a, const FrontierEntry& b) const {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.node > b.node;
  }
};

}  // namespace

DecisionTree grow_tree(const Dataset& ds, const IndexVector& sample,
                       const GrowConfig& cfg) {
  if (sample.empty()) throw std::invalid_argument("grow_tree: empty sample");
  if (cfg.max_leaf_nodes < 2)
    throw std::invalid_argument("grow_tree: max_leaf_nodes must be >= 2");
  if (cfg.min_samples_leaf < 1)
    throw std::invalid_argument("grow_tree: min_samples_leaf must be >= 1");
  const Index d = ds.dim();
  const Index d_used = cfg.feature_sample_size == 0 ? d : cfg.feature_sample_size;
  if (d_used < 1 || d_used > d)
    throw std::invalid_argument("grow_tree: feature_sample_size out of [1, d]");

  DecisionTree tree;
  tree.dim_ = d;
  tree.classes_ = ds.classes();
  tree.d_used_ = d_used;

  IndexVector buffer = sample;
  std::vector<BuildNode> build;
  Rng rng(cfg.seed);
  std::priority_queue<FrontierEntry, std::vector<FrontierEntry>, FrontierOrder>
      frontier;
  IndexVector feature_buf;

  auto make_node = [&](Index begin, Index end, Index depth) -> int {
    const int id = static_cast<int>(tree.nodes_.size());
    tree.nodes_.emplace_back();
    build.push_back(BuildNode{begin, end, depth, std::nullopt});

    const Index m = end - begin;
    if (m >= 2 * cfg.min_samples_leaf && m >= 2) {
      const auto counts =
          class_counts(ds, buffer, buffer.begin() + begin, buffer.begin() + end);
      const bool pure =
          std::count_if(counts.begin(), counts.end(),
                        [](Index c) { return c > 0; }) <= 1;
      if (!pure) {
        feature_buf = sample_features(d, d_used, rng);
        build[id].candidate = best_split_range(ds, buffer.begin() + begin,
                                               buffer.begin() + end, feature_buf,
                                               cfg.min_samples_leaf);
        if (build[id].candidate)
          frontier.push(FrontierEntry{build[id].candidate->impurity_decrease, id});
      }
    }
    return id;
  };

  make_node(0, static_cast<Index>(buffer.size()), 0);
  Index n_leaves = 1;

  while (n_leaves < cfg.max_leaf_nodes && !frontier.empty()) {
    const int id = frontier.top().node;
    frontier.pop();
    const Split split = build[id].candidate->split;
    const Index begin = build[id].begin, end = build[id].end;

    const auto mid = std::stable_partition(
        buffer.begin() + begin, buffer.begin() + end,
        [&](Index i) { return ds.x()(i, split.feature) <= split.threshold; });
    const Index split_at = mid - buffer.begin();

    const int left = make_node(begin, split_at, build[id].depth + 1);
    const int right = make_node(split_at, end, build[id].depth + 1);
    tree.nodes_[id].split = split;
    tree.nodes_[id].left = left;
    tree.nodes_[id].right = right;
    ++n_leaves;
  }

  // Frozen structure: fill leaf payloads and ordinals in node-index order.
  tree.n_leaves_ = n_leaves;
  for (std::size_t id = 0; id < tree.nodes_.size(); ++id) {
    TreeNode& node = tree.nodes_[id];
    if (!node.is_leaf()) continue;
    const auto counts = class_counts(ds, buffer, buffer.begin() + build[id].begin,
                                     buffer.begin() + build[id].end);
    const double m = double(build[id].end - build[id].begin);
    node.prediction = Vector(tree.classes_);
    for (Index c = 0; c < tree.classes_; ++c) node.prediction[c] = counts[c] / m;
    node.leaf_ordinal = static_cast<int>(tree.leaf_nodes_.size());
    tree.leaf_nodes_.push_back(static_cast<int>(id));
    tree.height_ = std::max(tree.height_, build[id].depth);
  }
  return tree;
}

int DecisionTree::node_of(const Eigen::Ref<const RowVector>& x) const {
  if (x.size() != dim_)
    throw std::invalid_argument("tree: expected " + std::to_string(dim_) +
                                " features, got " + std::to_string(x.size()));
  int id = 0;
  while (!nodes_[id].is_leaf()) {
    const Split& s = nodes_[id].split;
    id = x[s.feature] <= s.threshold ? nodes_[id].left : nodes_[id].right;
  }
  return id;
}

Vector DecisionTree::predict_proba(const Eigen::Ref<const RowVector>& x) const {
  return nodes_[node_of(x)].prediction;
}

Index DecisionTree::leaf_index(const Eigen::Ref<const RowVector>& x) const {
  return nodes_[node_of(x)].leaf_ordinal;
}

const Vector& DecisionTree::leaf_value(Index leaf) const {
  return nodes_.at(leaf_nodes_.at(leaf)).prediction;
}

void DecisionTree::set_leaf_value(Index leaf, const Vector& value) {
  if (value.size() != classes_)
    throw std::invalid_argument("set_leaf_value: wrong prediction arity");
  nodes_.at(leaf_nodes_.at(leaf)).prediction = value;
}

nlohmann::json DecisionTree::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& node : nodes_) {
    if (node.is_leaf()) {
      nodes.push_back({{"prediction", std::vector<double>(
                                          node.prediction.data(),
                                          node.prediction.data() + node.prediction.size())}});
    } else {
      nodes.push_back({{"feature", node.split.feature},
                       {"threshold", node.split.threshold},
                       {"left", node.left},
                       {"right", node.right}});
    }
  }
  return {{"dim", dim_},
          {"classes", classes_},
          {"feature_budget", d_used_},
          {"nodes", nodes}};
}

DecisionTree DecisionTree::from_json(const nlohmann::json& doc) {
  DecisionTree tree;
  tree.dim_ = doc.at("dim").get<Index>();
  tree.classes_ = doc.at("classes").get<Index>();
  tree.d_used_ = doc.at("feature_budget").get<Index>();

  for (const auto& entry : doc.at("nodes")) {
    TreeNode node;
    if (entry.contains("prediction")) {
      const auto values = entry.at("prediction").get<std::vector<double>>();
      node.prediction = Eigen::Map<const Vector>(values.data(), values.size());
      node.leaf_ordinal = static_cast<int>(tree.leaf_nodes_.size());
      tree.leaf_nodes_.push_back(static_cast<int>(tree.nodes_.size()));
    } else {
      node.split.feature = entry.at("feature").get<Index>();
      node.split.threshold = entry.at("threshold").get<double>();
      node.left = entry.at("left").get<int>();
      node.right = entry.at("right").get<int>();
    }
    tree.nodes_.push_back(std::move(node));
  }
  tree.n_leaves_ = static_cast<Index>(tree.leaf_nodes_.size());

  // Depths via a scan; parents always precede children.
  std::vector<Index> depth(tree.nodes_.size(), 0);
  for (std::size_t id = 0; id < tree.nodes_.size(); ++id) {
    const TreeNode& node = tree.nodes_[id];
    if (node.is_leaf()) {
      tree.height_ = std::max(tree.height_, depth[id]);
    } else {
      depth[node.left] = depth[id] + 1;
      depth[node.right] = depth[id] + 1;
    }
  }
  return tree;
}

}  // namespace forestlab
