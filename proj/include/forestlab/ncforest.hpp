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

#include <vector>

#include "forestlab/complexity.hpp"
#include "forestlab/forest.hpp"

namespace forestlab {

enum class OptimizerKind { plain_sgd, adam };

struct NclConfig {
  double lambda = 0.0;
  double step_size = 0.001;
  Index batch_size = 64;
  Index epochs = 50;
  OptimizerKind optimizer = OptimizerKind::adam;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;
  // Multiplies each member gradient by its ensemble weight (the literal
  // per-member routing factor); off by default, where the total derivative
  // of the objective is used.
  bool weight_scaled_gradient = false;
};

/// Negative-correlation loss of one example. member_outputs is M x C, y is
/// the one-hot target. With D = 2 I_C the penalty reduces to the mean
/// squared deviation of members from the ensemble, so
///   loss = (1/M) sum_i |h_i - y|^2 - (lambda/M) sum_i |h_i - f|^2.
double ncl_loss(const Eigen::Ref<const Matrix>& member_outputs,
                const Eigen::Ref<const Vector>& y, double lambda);

/// Mean ncl_loss over the rows in idx, with member outputs read from the
/// forest's current leaves.
double ncl_batch_loss(const Forest& f, const Dataset& ds, const IndexVector& idx,
                      double lambda);

/// Total derivative of ncl_loss with respect to member output h_i under
/// uniform weights: (2/M) ((h_i - y) - lambda (h_i - f)). The chain through
/// the ensemble mean cancels because the member deviations sum to zero.
template <typename HDerived, typename FDerived, typename YDerived>
Vector ncl_member_gradient(const Eigen::MatrixBase<HDerived>& h,
                           const Eigen::MatrixBase<FDerived>& f,
                           const Eigen::MatrixBase<YDerived>& y, double lambda,
                           Index members) {
  return (2.0 / double(members)) * ((h - y) - lambda * (h - f));
}

/// Per-tree gradient matrices shaped like the trees' leaf tables (L_i x C).
using LeafGradient = std::vector<Matrix>;

/// Mini-batch gradient of the NCL objective with respect to every leaf
/// value: each example's member gradient is routed to the one leaf the
/// example reaches in each tree, then averaged over the batch. Unvisited
/// leaves receive zero.
LeafGradient leaf_gradient(const Forest& f, const Dataset& ds,
                           const IndexVector& batch, double lambda,
                           bool weight_scaled = false);

struct EpochStats {
  Index epoch = 0;
  double ncl_loss = 0.0;
  double avg_member_mse = 0.0;
  double diversity = 0.0;
  double ensemble_mse = 0.0;
};

using RefineTrace = std::vector<EpochStats>;

/// Refines the forest's leaf predictions in place by mini-batch descent on
/// the NCL objective over seeded-shuffled epochs. Split structure is left
/// untouched; leaf vectors become unconstrained reals. Returns per-epoch
/// statistics evaluated on idx.
RefineTrace refine(Forest& f, const Dataset& ds, const IndexVector& idx,
                   const NclConfig& cfg);

/// Squared-error decomposition plus the C-bound estimate for the forest on
/// idx. The average member 0-1 loss uses the zero-margin rule for two-class
/// data and the argmax rule otherwise.
DiversityReport diversity_report(const Forest& f, const Dataset& ds,
                                 const IndexVector& idx);

}  // namespace forestlab
