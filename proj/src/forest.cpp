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

#include "forestlab/forest.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "forestlab/parallel.hpp"

namespace forestlab {

bool Forest::uniform_weights(double tol) const {
  if (weights.empty()) return false;
  const double w = 1.0 / static_cast<double>(weights.size());
  return std::all_of(weights.begin(), weights.end(),
                     [&](double v) { return std::abs(v - w) <= tol; });
}

void Forest::validate() const {
  if (trees.empty()) throw std::invalid_argument("forest: needs at least one tree");
  if (trees.size() != weights.size())
    throw std::invalid_argument("forest: tree/weight count mismatch");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0 || w > 1.0)
      throw std::invalid_argument("forest: weight outside [0, 1]");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("forest: weights must sum to 1");
  for (const auto& tree : trees)
    if (tree.dim() != trees.front().dim() || tree.classes() != trees.front().classes())
      throw std::invalid_argument("forest: trees disagree on d or C");
}

IndexVector bootstrap_sample(Index n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("bootstrap_sample: n must be >= 1");
  std::uniform_int_distribution<Index> pick(0, n - 1);
  IndexVector draws(n);
  for (Index i = 0; i < n; ++i) draws[i] = pick(rng);
  return draws;
}

Forest train_rf(const Dataset& ds, const IndexVector& sample,
                const ForestConfig& cfg) {
  if (sample.empty()) throw std::invalid_argument("train_rf: empty sample");
  if (cfg.n_trees < 1) throw std::invalid_argument("train_rf: need n_trees >= 1");

  Forest forest;
  forest.trees.resize(cfg.n_trees);
  forest.weights.assign(cfg.n_trees, 1.0 / static_cast<double>(cfg.n_trees));

  parallel_for(cfg.n_trees, [&](std::size_t i) {
    GrowConfig grow = cfg.grow;
    // Tree 0 with bootstrap off reproduces grow_tree under the grow seed.
    if (i > 0) grow.seed = derive_seed(cfg.grow.seed, i, 0x7265);
    IndexVector tree_sample;
    if (cfg.bootstrap) {
      Rng rng(derive_seed(cfg.seed, i, 0x626f));
      const IndexVector positions = bootstrap_sample(static_cast<Index>(sample.size()), rng);
      tree_sample.reserve(positions.size());
      for (Index p : positions) tree_sample.push_back(sample[p]);
    } else {
      tree_sample = sample;
    }
    forest.trees[i] = grow_tree(ds, tree_sample, grow);
  });
  return forest;
}

Vector predict(const Forest& f, const Eigen::Ref<const RowVector>& x) {
  if (f.trees.empty()) throw std::invalid_argument("predict: empty forest");
  Vector out = Vector::Zero(f.trees.front().classes());
  for (Index i = 0; i < f.size(); ++i)
    out += f.weights[i] * f.trees[i].predict_proba(x);
  return out;
}

namespace {

double score_from_proba(const Vector& p) {
  if (p.size() != 2)
    throw std::invalid_argument("binary_score: model has " +
                                std::to_string(p.size()) + " classes, expected 2");
  return std::clamp(p[1] - p[0], -1.0, 1.0);
}

}  // namespace

double binary_score(const Forest& f, const Eigen::Ref<const RowVector>& x) {
  return score_from_proba(predict(f, x));
}

double binary_score(const DecisionTree& t, const Eigen::Ref<const RowVector>& x) {
  return score_from_proba(t.predict_proba(x));
}

namespace {

template <typename Model>
double error_01_impl(const Model& model, const Dataset& ds, const IndexVector& idx) {
  if (idx.empty()) throw std::invalid_argument("error_01: empty index set");
  Index misses = 0;
  for (Index i : idx) {
    const Vector p = [&] {
      if constexpr (std::is_same_v<Model, Forest>) return predict(model, ds.x().row(i));
      else return model.predict_proba(ds.x().row(i));
    }();
    if (argmax_lowest(p) != ds.label_of(i)) ++misses;
  }
  return double(misses) / double(idx.size());
}

}  // namespace

double error_01(const Forest& f, const Dataset& ds, const IndexVector& idx) {
  return error_01_impl(f, ds, idx);
}

double error_01(const DecisionTree& t, const Dataset& ds, const IndexVector& idx) {
  return error_01_impl(t, ds, idx);
}

nlohmann::json Forest::to_json() const {
  nlohmann::json trees_doc = nlohmann::json::array();
  for (const auto& tree : trees) trees_doc.push_back(tree.to_json());
  return {{"weights", weights}, {"trees", trees_doc}};
}

Forest Forest::from_json(const nlohmann::json& doc) {
  Forest forest;
  forest.weights = doc.at("weights").get<std::vector<double>>();
  for (const auto& tree_doc : doc.at("trees"))
    forest.trees.push_back(DecisionTree::from_json(tree_doc));
  forest.validate();
  return forest;
}

}  // namespace forestlab
