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

#include "forestlab/ncforest.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace forestlab {

double ncl_loss(const Eigen::Ref<const Matrix>& member_outputs,
                const Eigen::Ref<const Vector>& y, double lambda) {
  const Index m = member_outputs.rows();
  if (m < 1) throw std::invalid_argument("ncl_loss: no members");
  if (member_outputs.cols() != y.size())
    throw std::invalid_argument("ncl_loss: output/target arity mismatch");

  const RowVector ensemble = member_outputs.colwise().mean();
  double member_se = 0.0, deviation = 0.0;
  for (Index i = 0; i < m; ++i) {
    member_se += (member_outputs.row(i) - y.transpose()).squaredNorm();
    deviation += (member_outputs.row(i) - ensemble).squaredNorm();
  }
  return member_se / double(m) - lambda * deviation / double(m);
}

double ncl_batch_loss(const Forest& f, const Dataset& ds, const IndexVector& idx,
                      double lambda) {
  if (idx.empty()) throw std::invalid_argument("ncl_batch_loss: empty batch");
  const Index m = f.size();
  Matrix outputs(m, ds.classes());
  double total = 0.0;
  for (Index i : idx) {
    for (Index t = 0; t < m; ++t)
      outputs.row(t) = f.trees[t].predict_proba(ds.x().row(i));
    total += ncl_loss(outputs, ds.y().row(i).transpose(), lambda);
  }
  return total / double(idx.size());
}

LeafGradient leaf_gradient(const Forest& f, const Dataset& ds,
                           const IndexVector& batch, double lambda,
                           bool weight_scaled) {
  f.validate();
  if (!f.uniform_weights())
    throw std::invalid_argument("leaf_gradient: requires uniform weights");
  if (batch.empty()) throw std::invalid_argument("leaf_gradient: empty batch");

  const Index m = f.size();
  const Index n_classes = ds.classes();
  LeafGradient grad;
  grad.reserve(m);
  for (const auto& tree : f.trees)
    grad.push_back(Matrix::Zero(tree.n_leaves(), n_classes));

  Matrix outputs(m, n_classes);
  std::vector<Index> leaves(m);
  for (Index i : batch) {
    const auto x = ds.x().row(i);
    for (Index t = 0; t < m; ++t) {
      leaves[t] = f.trees[t].leaf_index(x);
      outputs.row(t) = f.trees[t].leaf_value(leaves[t]);
    }
    const RowVector ensemble = outputs.colwise().mean();
    const auto y = ds.y().row(i);
    for (Index t = 0; t < m; ++t) {
      RowVector g = (2.0 / double(m)) *
                    ((outputs.row(t) - y) - lambda * (outputs.row(t) - ensemble));
      if (weight_scaled) g *= f.weights[t];
      grad[t].row(leaves[t]) += g;
    }
  }
  for (auto& g : grad) g /= double(batch.size());
  return grad;
}

namespace {

struct LeafTable {
  std::vector<Matrix> beta;  // per tree, L_i x C

  explicit LeafTable(const Forest& f) {
    beta.reserve(f.trees.size());
    for (const auto& tree : f.trees) {
      Matrix values(tree.n_leaves(), tree.classes());
      for (Index l = 0; l < tree.n_leaves(); ++l)
        values.row(l) = tree.leaf_value(l).transpose();
      beta.push_back(std::move(values));
    }
  }

  void store(Forest& f) const {
    for (Index t = 0; t < static_cast<Index>(beta.size()); ++t)
      for (Index l = 0; l < f.trees[t].n_leaves(); ++l)
        f.trees[t].set_leaf_value(l, beta[t].row(l).transpose());
  }
};

std::vector<Matrix> zeros_like(const std::vector<Matrix>& shape) {
  std::vector<Matrix> out;
  out.reserve(shape.size());
  for (const auto& m : shape) out.push_back(Matrix::Zero(m.rows(), m.cols()));
  return out;
}

EpochStats evaluate_epoch(Index epoch, const std::vector<Matrix>& beta,
                          const Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>& leaf_of,
                          const Dataset& ds, const IndexVector& idx, double lambda) {
  const Index m = static_cast<Index>(beta.size());
  const Index n_classes = ds.classes();
  EpochStats stats;
  stats.epoch = epoch;

  Matrix outputs(m, n_classes);
  for (Index row = 0; row < static_cast<Index>(idx.size()); ++row) {
    for (Index t = 0; t < m; ++t) outputs.row(t) = beta[t].row(leaf_of(row, t));
    const RowVector ensemble = outputs.colwise().mean();
    const auto y = ds.y().row(idx[row]);

    double member_se = 0.0, deviation = 0.0;
    for (Index t = 0; t < m; ++t) {
      member_se += (outputs.row(t) - y).squaredNorm();
      deviation += (outputs.row(t) - ensemble).squaredNorm();
    }
    stats.avg_member_mse += member_se / double(m);
    stats.diversity += deviation / double(m);
    stats.ensemble_mse += (ensemble - y).squaredNorm();
  }
  const double n = double(idx.size());
  stats.avg_member_mse /= n;
  stats.diversity /= n;
  stats.ensemble_mse /= n;
  stats.ncl_loss = stats.avg_member_mse - lambda * stats.diversity;
  return stats;
}

}  // namespace

RefineTrace refine(Forest& f, const Dataset& ds, const IndexVector& idx,
                   const NclConfig& cfg) {
  f.validate();
  if (!f.uniform_weights())
    throw std::invalid_argument("refine: requires uniform weights");
  if (idx.empty()) throw std::invalid_argument("refine: empty training set");
  if (cfg.batch_size < 1 || cfg.epochs < 1 || cfg.step_size <= 0.0)
    throw std::invalid_argument("refine: invalid optimizer configuration");

  const Index m = f.size();
  const Index n = static_cast<Index>(idx.size());
  const Index n_classes = ds.classes();

  // Structure is frozen during refinement, so leaf routing is resolved once.
  Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic> leaf_of(n, m);
  for (Index row = 0; row < n; ++row) {
    const auto x = ds.x().row(idx[row]);
    for (Index t = 0; t < m; ++t)
      leaf_of(row, t) = static_cast<int>(f.trees[t].leaf_index(x));
  }

  LeafTable table(f);
  auto grad = zeros_like(table.beta);
  auto moment1 = zeros_like(table.beta);
  auto moment2 = zeros_like(table.beta);

  Rng shuffle_rng(derive_seed(cfg.seed, 0x5f1e));
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});

  Matrix outputs(m, n_classes);
  RefineTrace trace;
  trace.reserve(cfg.epochs);
  long step = 0;

  for (Index epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    for (Index start = 0; start < n; start += cfg.batch_size) {
      const Index stop = std::min(n, start + cfg.batch_size);
      const double batch_n = double(stop - start);
      for (auto& g : grad) g.setZero();

      for (Index b = start; b < stop; ++b) {
        const Index row = order[b];
        for (Index t = 0; t < m; ++t)
          outputs.row(t) = table.beta[t].row(leaf_of(row, t));
        const RowVector ensemble = outputs.colwise().mean();
        const auto y = ds.y().row(idx[row]);
        for (Index t = 0; t < m; ++t) {
          RowVector g = (2.0 / double(m)) * ((outputs.row(t) - y) -
                                             cfg.lambda * (outputs.row(t) - ensemble));
          if (cfg.weight_scaled_gradient) g *= f.weights[t];
          grad[t].row(leaf_of(row, t)) += g;
        }
      }

      ++step;
      if (cfg.optimizer == OptimizerKind::plain_sgd) {
        for (Index t = 0; t < m; ++t)
          table.beta[t] -= (cfg.step_size / batch_n) * grad[t];
      } else {
        const double c1 = 1.0 - std::pow(cfg.adam_beta1, double(step));
        const double c2 = 1.0 - std::pow(cfg.adam_beta2, double(step));
        for (Index t = 0; t < m; ++t) {
          const Matrix g = grad[t] / batch_n;
          moment1[t] = cfg.adam_beta1 * moment1[t] + (1.0 - cfg.adam_beta1) * g;
          moment2[t] = cfg.adam_beta2 * moment2[t] +
                       (1.0 - cfg.adam_beta2) * g.cwiseProduct(g);
          table.beta[t].array() -=
              cfg.step_size * (moment1[t].array() / c1) /
              ((moment2[t].array() / c2).sqrt() + cfg.adam_eps);
        }
      }
    }

    trace.push_back(evaluate_epoch(epoch, table.beta, leaf_of, ds, idx, cfg.lambda));
  }

  table.store(f);
  return trace;
}

DiversityReport diversity_report(const Forest& f, const Dataset& ds,
                                 const IndexVector& idx) {
  const AmbiguityTerms terms = ambiguity_decomposition(f, ds, idx);

  DiversityReport report;
  report.avg_member_mse = terms.avg_member_mse;
  report.diversity = terms.diversity;
  report.ensemble_mse = terms.ensemble_mse;

  double member_01 = 0.0;
  if (ds.classes() == 2) {
    const Vector labels = ds.binary_labels();
    for (const auto& tree : f.trees) {
      std::vector<std::pair<double, double>> scores;
      scores.reserve(idx.size());
      for (Index i : idx)
        scores.emplace_back(binary_score(tree, ds.x().row(i)), labels[i]);
      member_01 += margin_loss(scores, 0.0);
    }
  } else {
    for (const auto& tree : f.trees) {
      Index misses = 0;
      for (Index i : idx)
        if (argmax_lowest(tree.predict_proba(ds.x().row(i))) != ds.label_of(i))
          ++misses;
      member_01 += double(misses) / double(idx.size());
    }
  }
  report.avg_member_01 = member_01 / double(f.size());

  if (report.diversity > 0.0) {
    report.cbound = cbound_estimate(report.avg_member_01, report.diversity);
    report.cbound_defined = true;
  }
  return report;
}

}  // namespace forestlab
