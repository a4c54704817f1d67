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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "forestlab/dataio.hpp"

namespace forestlab {

enum class Protocol { complexity_sweep, da_sweep, lambda_sweep };

std::string protocol_name(Protocol p);
Protocol protocol_from_name(const std::string& name);

/// A fully resolved experiment. Unset numeric fields are 0 / empty and are
/// filled from the scale preset by finalize().
struct ExperimentConfig {
  std::string dataset;
  Protocol protocol = Protocol::complexity_sweep;
  std::string scale = "desk";  // "desk" or "paper"
  std::uint64_t seed = 1;
  int folds = 0;
  Index trees = 0;              // M
  std::vector<double> grid;     // leaf budgets or lambda values
  std::string manifest;
  std::string output;

  Index augment_copies = -1;    // T
  double augment_noise = -1.0;  // Gaussian sigma
  Index teacher_leaves = 0;     // saturated teacher budget for the DA sweep
  Index refine_leaves = 0;      // base forest budget for the lambda sweep
  Index refine_epochs = 0;
  Index refine_batch = 0;
  double refine_step = 0.0;
  bool record_timing = false;

  /// Fills every unset field from the protocol/scale preset and validates.
  void finalize();

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& doc);
};

/// Parses the declarative "key = value" config format (one pair per line,
/// '#' comments). Does not finalize.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// One measured cell. Optional fields stay empty in the CSV when a protocol
/// does not produce them; wall_time is only filled when record_timing is on
/// so that re-runs stay byte-identical by default.
struct ResultRow {
  std::string dataset;
  int fold = 0;
  std::string protocol;
  std::string model;  // DT | RF | DA-DT | DA-RF | NCF
  std::optional<double> grid_value;
  double train_error = 0.0;
  double test_error = 0.0;
  double ensemble_rademacher = 0.0;
  double avg_height = 0.0;
  std::optional<double> avg_member_mse;
  std::optional<double> diversity;
  std::optional<double> ensemble_mse;
  std::optional<double> cbound;
  std::optional<double> wall_time;
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<ResultRow> rows;
  nlohmann::json dataset_info;
  nlohmann::json diagnostics;
  std::map<std::string, std::string> extra_files;  // name -> content (traces)
  std::vector<std::string> failed_cells;
  double total_seconds = 0.0;
};

/// Leaf-budget sweep training a single tree and a forest per grid point
/// (the complexity protocol).
SweepResult run_complexity_sweep(const ExperimentConfig& cfg);

/// Distillation sweep: per fold one saturated forest teacher and one
/// saturated tree teacher, students swept over the grid.
SweepResult run_da_sweep(const ExperimentConfig& cfg);

/// Diversity sweep: per fold one base forest, refined once per lambda; the
/// unrefined forest is included as a reference row with an empty grid cell.
SweepResult run_lambda_sweep(const ExperimentConfig& cfg);

SweepResult run_sweep(const ExperimentConfig& cfg);

/// Writes rows.csv, summary.csv, manifest.json and any trace files into dir.
/// Returns the paths written.
std::vector<std::string> emit(const SweepResult& result, const std::string& dir);

std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_csv(const std::string& text);

/// Per-(protocol, model, grid value) means over folds; a pure function of
/// the per-fold rows.
std::string summarize_csv(const std::vector<ResultRow>& rows);

/// Reads the effective config back out of a run manifest.
ExperimentConfig config_from_manifest(const std::string& path);

}  // namespace forestlab
