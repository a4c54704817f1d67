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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "forestlab/harness.hpp"
#include "forestlab/synthdata.hpp"

namespace {

struct SweepOptions {
  std::string config;
  std::string dataset;
  std::string manifest;
  std::string out;
  std::string scale;
  std::string grid;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int folds = 0;
  long trees = 0;
  bool timing = false;
};

void add_sweep_flags(CLI::App* cmd, SweepOptions& opts) {
  cmd->add_option("--config", opts.config,
                  "Config file (key = value lines, or a previous run's manifest.json)");
  cmd->add_option("--dataset", opts.dataset, "Dataset name from the manifest");
  cmd->add_option("--manifest", opts.manifest, "Dataset manifest (JSON)");
  cmd->add_option("--out", opts.out, "Output directory");
  cmd->add_option("--scale", opts.scale, "Preset scale: desk or paper")
      ->check(CLI::IsMember({"desk", "paper"}));
  cmd->add_option("--grid", opts.grid, "Grid values (comma or space separated)");
  cmd->add_option("--seed", opts.seed, "Master seed")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
  cmd->add_option("--folds", opts.folds, "Cross-validation folds");
  cmd->add_option("--trees", opts.trees, "Ensemble size M");
  cmd->add_flag("--timing", opts.timing, "Record per-cell wall time in rows.csv "
                                         "(makes re-runs non-identical)");
}

forestlab::ExperimentConfig build_config(const SweepOptions& opts,
                                         forestlab::Protocol protocol) {
  using namespace forestlab;
  ExperimentConfig cfg;
  bool config_has_protocol = false;
  if (!opts.config.empty()) {
    if (opts.config.size() > 5 &&
        opts.config.substr(opts.config.size() - 5) == ".json") {
      cfg = config_from_manifest(opts.config);
      config_has_protocol = true;
    } else {
      const std::string text = [&] {
        std::ifstream in(opts.config);
        if (!in) throw std::runtime_error("cannot open config '" + opts.config + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
      }();
      config_has_protocol = text.find("protocol") != std::string::npos;
      cfg = parse_config_text(text);
    }
    if (config_has_protocol && cfg.protocol != protocol)
      throw std::runtime_error("config names protocol '" +
                               protocol_name(cfg.protocol) +
                               "' but the subcommand runs '" +
                               protocol_name(protocol) + "'");
  }
  cfg.protocol = protocol;
  if (!opts.dataset.empty()) cfg.dataset = opts.dataset;
  if (!opts.manifest.empty()) cfg.manifest = opts.manifest;
  if (!opts.out.empty()) cfg.output = opts.out;
  if (!opts.scale.empty()) cfg.scale = opts.scale;
  if (opts.seed_set) cfg.seed = opts.seed;
  if (opts.folds > 0) cfg.folds = opts.folds;
  if (opts.trees > 0) cfg.trees = opts.trees;
  if (opts.timing) cfg.record_timing = true;
  if (!opts.grid.empty()) {
    cfg.grid.clear();
    std::string token;
    std::stringstream values(opts.grid);
    while (std::getline(values, token, ',')) {
      std::stringstream inner(token);
      std::string word;
      while (inner >> word) cfg.grid.push_back(std::stod(word));
    }
  }
  cfg.finalize();
  return cfg;
}

int run_sweep_command(const SweepOptions& opts, forestlab::Protocol protocol) {
  using namespace forestlab;
  const ExperimentConfig cfg = build_config(opts, protocol);
  std::cout << "running " << protocol_name(cfg.protocol) << " on '" << cfg.dataset
            << "' (" << cfg.scale << " scale, " << cfg.folds << " folds, M="
            << cfg.trees << ", " << cfg.grid.size() << " grid points)\n";

  const SweepResult result = run_sweep(cfg);
  const auto written = emit(result, cfg.output);

  std::cout << result.rows.size() << " result rows in "
            << result.total_seconds << " s\n";
  for (const auto& path : written) std::cout << "  wrote " << path << "\n";
  if (!result.failed_cells.empty()) {
    std::cerr << result.failed_cells.size() << " cell(s) failed:\n";
    for (const auto& cell : result.failed_cells) std::cerr << "  " << cell << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forestlab: decision-tree and random-forest capacity/diversity "
               "experiments"};
  app.require_subcommand(1);

  SweepOptions complexity_opts, da_opts, lambda_opts;
  auto* sweep_complexity = app.add_subcommand(
      "sweep-complexity", "Leaf-budget sweep for a single tree and a forest");
  add_sweep_flags(sweep_complexity, complexity_opts);
  auto* sweep_da = app.add_subcommand(
      "sweep-da", "Student leaf-budget sweep with saturated distillation teachers");
  add_sweep_flags(sweep_da, da_opts);
  auto* sweep_lambda = app.add_subcommand(
      "sweep-lambda", "Diversity sweep: leaf refinement across lambda values");
  add_sweep_flags(sweep_lambda, lambda_opts);

  std::string report_rows, report_out;
  auto* report = app.add_subcommand(
      "report", "Recompute the fold-averaged summary from a rows.csv");
  report->add_option("--rows", report_rows, "Per-fold rows.csv")->required();
  report->add_option("--out", report_out, "Summary CSV path (default: stdout)");

  std::string datagen_out = "data";
  std::string datagen_sets = "magic,eeg,tiny";
  std::uint64_t datagen_seed = 1;
  auto* datagen = app.add_subcommand(
      "datagen", "Write the bundled synthetic datasets and their manifest");
  datagen->add_option("--out", datagen_out, "Target directory");
  datagen->add_option("--datasets", datagen_sets, "Comma-separated preset names");
  datagen->add_option("--seed", datagen_seed, "Generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep_complexity->parsed())
      return run_sweep_command(complexity_opts, forestlab::Protocol::complexity_sweep);
    if (sweep_da->parsed())
      return run_sweep_command(da_opts, forestlab::Protocol::da_sweep);
    if (sweep_lambda->parsed())
      return run_sweep_command(lambda_opts, forestlab::Protocol::lambda_sweep);

    if (report->parsed()) {
      std::ifstream in(report_rows, std::ios::binary);
      if (!in) throw std::runtime_error("cannot open '" + report_rows + "'");
      std::stringstream buffer;
      buffer << in.rdbuf();
      const auto rows = forestlab::rows_from_csv(buffer.str());
      const std::string summary = forestlab::summarize_csv(rows);
      if (report_out.empty()) {
        std::cout << summary;
      } else {
        std::ofstream out(report_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + report_out + "'");
        out << summary;
        std::cout << "wrote " << report_out << "\n";
      }
      return 0;
    }

    if (datagen->parsed()) {
      std::vector<std::string> kinds;
      std::stringstream names(datagen_sets);
      std::string kind;
      while (std::getline(names, kind, ','))
        if (!kind.empty()) kinds.push_back(kind);
      const std::string manifest =
          forestlab::write_datasets(datagen_out, kinds, datagen_seed);
      std::cout << "wrote " << manifest << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
