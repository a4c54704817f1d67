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

#include "forestlab/complexity.hpp"

#include <nlohmann/json.hpp>

namespace forestlab {

ComplexityReport ensemble_rademacher(const Forest& f, Index n_samples) {
  f.validate();
  ComplexityReport report;
  report.n_samples = n_samples;
  report.per_tree.reserve(f.trees.size());

  double weighted = 0.0;
  double height_sum = 0.0;
  for (Index i = 0; i < f.size(); ++i) {
    const DecisionTree& tree = f.trees[i];
    TreeComplexity tc;
    tc.n_nodes = tree.n_nodes();
    tc.height = tree.height();
    tc.rademacher = asymptotic_rademacher(tree.n_nodes(), tree.d_used(), n_samples);
    weighted += f.weights[i] * tc.rademacher;
    height_sum += double(tree.height());
    report.per_tree.push_back(tc);
  }
  report.ensemble_rademacher = weighted;
  report.avg_height = height_sum / double(f.size());
  return report;
}

double margin_loss(const std::vector<std::pair<double, double>>& scores,
                   double rho) {
  if (scores.empty()) throw std::invalid_argument("margin_loss: empty score list");
  Index misses = 0;
  for (const auto& [score, label] : scores)
    if (label * score <= rho) ++misses;
  return double(misses) / double(scores.size());
}

AmbiguityTerms ambiguity_decomposition(const Forest& f, const Dataset& ds,
                                       const IndexVector& idx) {
  f.validate();
  if (!f.uniform_weights())
    throw std::invalid_argument(
        "ambiguity_decomposition: requires uniform weights");
  if (idx.empty()) throw std::invalid_argument("ambiguity_decomposition: empty index set");

  const Index m = f.size();
  const Index n_classes = ds.classes();
  AmbiguityTerms terms;
  Vector ensemble(n_classes);
  Matrix member(m, n_classes);

  for (Index i : idx) {
    const auto x = ds.x().row(i);
    ensemble.setZero();
    for (Index t = 0; t < m; ++t) {
      member.row(t) = f.trees[t].predict_proba(x);
      ensemble += member.row(t);
    }
    ensemble /= double(m);

    const auto y = ds.y().row(i).transpose();
    double member_se = 0.0, deviation = 0.0;
    for (Index t = 0; t < m; ++t) {
      member_se += (member.row(t).transpose() - y).squaredNorm();
      deviation += (member.row(t).transpose() - ensemble).squaredNorm();
    }
    terms.avg_member_mse += member_se / double(m);
    terms.diversity += deviation / double(m);
    terms.ensemble_mse += (ensemble - y).squaredNorm();
  }

  const double n = double(idx.size());
  terms.avg_member_mse /= n;
  terms.diversity /= n;
  terms.ensemble_mse /= n;
  return terms;
}

nlohmann::json ComplexityReport::to_json() const {
  nlohmann::json per_tree_doc = nlohmann::json::array();
  for (const auto& tc : per_tree)
    per_tree_doc.push_back({{"n_nodes", tc.n_nodes},
                            {"height", tc.height},
                            {"rademacher", tc.rademacher}});
  return {{"per_tree", per_tree_doc},
          {"ensemble_rademacher", ensemble_rademacher},
          {"avg_height", avg_height},
          {"n_samples", n_samples},
          {"node_count_convention", node_count_convention},
          {"log_convention", log_convention}};
}

nlohmann::json DiversityReport::to_json() const {
  nlohmann::json doc = {{"avg_member_mse", avg_member_mse},
                        {"diversity", diversity},
                        {"ensemble_mse", ensemble_mse},
                        {"avg_member_01", avg_member_01}};
  if (cbound_defined) doc["cbound"] = cbound;
  return doc;
}

}  // namespace forestlab
