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

#include "forestlab/distill.hpp"

#include <numeric>
#include <stdexcept>

namespace forestlab {

Scorer scorer_of(const Forest& f) {
  return [&f](const Eigen::Ref<const RowVector>& x) { return predict(f, x); };
}

Scorer scorer_of(const DecisionTree& t) {
  return [&t](const Eigen::Ref<const RowVector>& x) { return t.predict_proba(x); };
}

Dataset augment(const Dataset& ds, const IndexVector& idx, const Scorer& teacher,
                const AugmentConfig& cfg) {
  if (idx.empty()) throw std::invalid_argument("augment: empty index set");
  if (cfg.copies < 0) throw std::invalid_argument("augment: copies must be >= 0");
  if (cfg.noise < 0.0) throw std::invalid_argument("augment: noise must be >= 0");

  const Index n = static_cast<Index>(idx.size());
  const Index d = ds.dim();
  const Index n_classes = ds.classes();
  Matrix x((cfg.copies + 1) * n, d);
  Matrix y = Matrix::Zero((cfg.copies + 1) * n, n_classes);

  for (Index j = 0; j < n; ++j) {
    x.row(j) = ds.x().row(idx[j]);
    y.row(j) = ds.y().row(idx[j]);
  }

  for (Index copy = 0; copy < cfg.copies; ++copy) {
    Rng rng(derive_seed(cfg.seed, copy, 0xa06));
    std::normal_distribution<double> noise(0.0, cfg.noise);
    const Index base = (copy + 1) * n;
    for (Index j = 0; j < n; ++j) {
      auto row = x.row(base + j);
      row = ds.x().row(idx[j]);
      if (cfg.noise > 0.0)
        for (Index c = 0; c < d; ++c) row[c] += noise(rng);
      y(base + j, argmax_lowest(teacher(row))) = 1.0;
    }
  }

  return Dataset(std::move(x), std::move(y), ds.feature_names(), ds.class_names(),
                 ds.name() + "+aug");
}

namespace {

IndexVector all_rows(const Dataset& ds) {
  IndexVector idx(ds.n());
  std::iota(idx.begin(), idx.end(), Index{0});
  return idx;
}

}  // namespace

DecisionTree train_da_dt(const Dataset& ds, const IndexVector& idx,
                         const ForestConfig& teacher_cfg,
                         const GrowConfig& student_cfg,
                         const AugmentConfig& aug) {
  const Forest teacher = train_rf(ds, idx, teacher_cfg);
  const Dataset enlarged = augment(ds, idx, scorer_of(teacher), aug);
  return grow_tree(enlarged, all_rows(enlarged), student_cfg);
}

Forest train_da_rf(const Dataset& ds, const IndexVector& idx,
                   const GrowConfig& teacher_cfg,
                   const ForestConfig& student_cfg,
                   const AugmentConfig& aug) {
  const DecisionTree teacher = grow_tree(ds, idx, teacher_cfg);
  const Dataset enlarged = augment(ds, idx, scorer_of(teacher), aug);
  return train_rf(enlarged, all_rows(enlarged), student_cfg);
}

}  // namespace forestlab
