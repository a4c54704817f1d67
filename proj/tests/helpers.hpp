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

#include <numeric>
#include <string>
#include <vector>

#include "forestlab/dataio.hpp"
#include "forestlab/forest.hpp"
#include "forestlab/ncforest.hpp"

namespace forestlab::testing {

/// Two-class Gaussian blobs with one cluster per class; labels may be
/// flipped with the given probability.
inline Dataset random_blobs(Index n, Index d, std::uint64_t seed,
                            double sigma = 0.25, double flip = 0.0) {
  Rng rng(seed);
  std::normal_distribution<double> jitter(0.0, sigma);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix x(n, d);
  Matrix y = Matrix::Zero(n, 2);
  for (Index i = 0; i < n; ++i) {
    const int label = i % 2;
    for (Index j = 0; j < d; ++j)
      x(i, j) = (label == 0 ? 0.3 : 0.7) + jitter(rng);
    const bool flipped = unit(rng) < flip;
    y(i, flipped ? 1 - label : label) = 1.0;
  }
  return Dataset(std::move(x), std::move(y), {}, {"neg", "pos"}, "blobs");
}

inline IndexVector all_indices(const Dataset& ds) {
  IndexVector idx(ds.n());
  std::iota(idx.begin(), idx.end(), Index{0});
  return idx;
}

inline Forest random_forest_fixture(const Dataset& ds, Index m, Index budget,
                                    std::uint64_t seed) {
  ForestConfig cfg;
  cfg.n_trees = m;
  cfg.grow = GrowConfig{budget, std::min<Index>(ds.dim(), 2), 1, seed};
  cfg.seed = derive_seed(seed, 0xf0);
  return train_rf(ds, all_indices(ds), cfg);
}

/// Central finite differences of the batch NCL loss with respect to every
/// leaf entry; the independent oracle for leaf_gradient.
inline LeafGradient fd_leaf_gradient(const Forest& forest, const Dataset& ds,
                                     const IndexVector& batch, double lambda,
                                     double h = 1e-6) {
  Forest probe = forest;
  LeafGradient grad;
  for (Index t = 0; t < probe.size(); ++t) {
    DecisionTree& tree = probe.trees[t];
    Matrix g(tree.n_leaves(), tree.classes());
    for (Index l = 0; l < tree.n_leaves(); ++l) {
      for (Index c = 0; c < tree.classes(); ++c) {
        const Vector original = tree.leaf_value(l);
        Vector bumped = original;
        bumped[c] = original[c] + h;
        tree.set_leaf_value(l, bumped);
        const double up = ncl_batch_loss(probe, ds, batch, lambda);
        bumped[c] = original[c] - h;
        tree.set_leaf_value(l, bumped);
        const double down = ncl_batch_loss(probe, ds, batch, lambda);
        tree.set_leaf_value(l, original);
        g(l, c) = (up - down) / (2.0 * h);
      }
    }
    grad.push_back(std::move(g));
  }
  return grad;
}

inline double gradient_relative_error(const LeafGradient& a, const LeafGradient& b) {
  double diff = 0.0, norm = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    diff += (a[t] - b[t]).squaredNorm();
    norm += a[t].squaredNorm();
  }
  return std::sqrt(diff) / std::max(std::sqrt(norm), 1e-12);
}

}  // namespace forestlab::testing
