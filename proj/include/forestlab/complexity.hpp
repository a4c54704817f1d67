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
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "forestlab/dataio.hpp"
#include "forestlab/forest.hpp"

namespace forestlab {

/// Asymptotic Rademacher complexity of one tree: sqrt(2 n ln(n + d) / N),
/// where n counts all nodes (inner and leaf) and d is the feature budget.
/// Natural logarithm throughout.
inline double asymptotic_rademacher(Index n_nodes, Index d_used, Index n_samples) {
  if (n_nodes < 1 || d_used < 1)
    throw std::invalid_argument("asymptotic_rademacher: need n >= 1 and d >= 1");
  if (n_samples < 1)
    throw std::invalid_argument("asymptotic_rademacher: need N >= 1");
  return std::sqrt(2.0 * double(n_nodes) *
                   std::log(double(n_nodes) + double(d_used)) / double(n_samples));
}

/// VC-dimension bound for a tree with n nodes on d binary features:
/// (2n + 1) log2(d + 1).
inline double mansour_vc_bound(Index n_nodes, Index d) {
  if (n_nodes < 1 || d < 1)
    throw std::invalid_argument("mansour_vc_bound: need n >= 1 and d >= 1");
  return (2.0 * double(n_nodes) + 1.0) * std::log2(double(d) + 1.0);
}

/// Rademacher complexity from a VC value: sqrt(2 D / N).
inline double vc_to_rademacher(double vc, Index n_samples) {
  if (vc < 0.0) throw std::invalid_argument("vc_to_rademacher: need D >= 0");
  if (n_samples < 1) throw std::invalid_argument("vc_to_rademacher: need N >= 1");
  return std::sqrt(2.0 * vc / double(n_samples));
}

struct TreeComplexity {
  Index n_nodes = 0;
  Index height = 0;
  double rademacher = 0.0;
};

/// Per-tree asymptotic Rademacher values and their weight-averaged ensemble
/// value. node_count_convention records that n counts all nodes.
struct ComplexityReport {
  std::vector<TreeComplexity> per_tree;
  double ensemble_rademacher = 0.0;
  double avg_height = 0.0;
  Index n_samples = 0;
  std::string node_count_convention = "total-nodes";
  std::string log_convention = "natural";

  nlohmann::json to_json() const;
};

ComplexityReport ensemble_rademacher(const Forest& f, Index n_samples);

/// Margin loss over binary scores: fraction of points with y * f(x) <= rho.
/// scores holds (f(x), y) pairs with y in {-1, +1}.
double margin_loss(const std::vector<std::pair<double, double>>& scores, double rho);

/// Member/ensemble squared-error decomposition and the printed C-bound
/// estimate, evaluated on one index set.
struct DiversityReport {
  double avg_member_mse = 0.0;
  double diversity = 0.0;
  double ensemble_mse = 0.0;
  double avg_member_01 = 0.0;
  double cbound = 0.0;
  bool cbound_defined = false;

  nlohmann::json to_json() const;
};

/// Means over idx of the member squared error, the squared deviation of
/// members from the ensemble, and the ensemble squared error. Requires
/// uniform weights, for which ensemble_mse = avg_member_mse - diversity.
/// Returns (avg_member_mse, diversity, ensemble_mse).
struct AmbiguityTerms {
  double avg_member_mse = 0.0;
  double diversity = 0.0;
  double ensemble_mse = 0.0;
};

AmbiguityTerms ambiguity_decomposition(const Forest& f, const Dataset& ds,
                                       const IndexVector& idx);

/// The printed two-moment bound with the vanishing terms dropped:
/// 1 - max(0, avg_member_01)^2 / min(1, covariance). An estimate, not a
/// certified bound. covariance must be positive.
inline double cbound_estimate(double avg_member_01, double covariance) {
  if (!std::isfinite(avg_member_01) || !std::isfinite(covariance))
    throw std::invalid_argument("cbound_estimate: non-finite input");
  if (covariance <= 0.0)
    throw std::invalid_argument("cbound_estimate: covariance must be > 0");
  const double numerator = std::max(0.0, avg_member_01);
  return 1.0 - numerator * numerator / std::min(1.0, covariance);
}

}  // namespace forestlab
