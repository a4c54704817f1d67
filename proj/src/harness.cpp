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

#include "forestlab/harness.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "forestlab/complexity.hpp"
#include "forestlab/distill.hpp"
#include "forestlab/ncforest.hpp"
#include "forestlab/parallel.hpp"
#include "forestlab/synthdata.hpp"

namespace forestlab {

namespace {

constexpr const char* kRowHeader =
    "dataset,fold,protocol,model,grid_value,train_error,test_error,"
    "ensemble_rademacher,avg_height,avg_member_mse,diversity,ensemble_mse,"
    "cbound,wall_time";

std::string format_double(double v) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto result = std::from_chars(s.data(), s.data() + s.size(), v);
  if (result.ec != std::errc{} || result.ptr != s.data() + s.size())
    throw std::runtime_error("cannot parse number '" + s + "'");
  return v;
}

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<double> default_grid(Protocol protocol, bool paper) {
  std::vector<double> grid;
  switch (protocol) {
    case Protocol::complexity_sweep:
      for (Index b = paper ? 2 : 16; b <= (paper ? 16384 : 4096); b *= 2)
        grid.push_back(double(b));
      break;
    case Protocol::da_sweep:
      if (paper) {
        for (Index b = 2; b <= 16384; b *= 2) grid.push_back(double(b));
      } else {
        grid = {16, 64, 256, 1024, 4096};
      }
      break;
    case Protocol::lambda_sweep:
      if (paper) {
        for (int i = 0; i <= 210; ++i) grid.push_back(double(i - 200) / 10.0);
        for (int j = 1; j <= 5; ++j) grid.push_back(1.0 + double(j) / 1000.0);
      } else {
        grid = {-20.0, -10.0, -5.0, -4.0, -3.0, -2.0, -1.0, -0.5,
                0.0,   0.5,   0.9,  1.0,  1.001, 1.003, 1.005};
      }
      break;
  }
  return grid;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::string protocol_name(Protocol p) {
  switch (p) {
    case Protocol::complexity_sweep: return "complexity_sweep";
    case Protocol::da_sweep: return "da_sweep";
    case Protocol::lambda_sweep: return "lambda_sweep";
  }
  throw std::logic_error("unreachable");
}

Protocol protocol_from_name(const std::string& name) {
  if (name == "complexity_sweep") return Protocol::complexity_sweep;
  if (name == "da_sweep") return Protocol::da_sweep;
  if (name == "lambda_sweep") return Protocol::lambda_sweep;
  throw std::runtime_error("unknown protocol '" + name + "'");
}

void ExperimentConfig::finalize() {
  if (scale != "desk" && scale != "paper")
    throw std::runtime_error("config: scale must be 'desk' or 'paper'");
  if (dataset.empty()) throw std::runtime_error("config: dataset is required");
  if (manifest.empty()) throw std::runtime_error("config: manifest is required");
  if (output.empty()) output = "results";

  const bool paper = scale == "paper";
  if (folds == 0) folds = 5;
  if (folds < 2) throw std::runtime_error("config: folds must be >= 2");
  if (trees == 0) trees = paper ? 256 : 64;
  if (augment_copies < 0) augment_copies = 10;
  if (augment_noise < 0.0) augment_noise = 0.01;
  if (teacher_leaves == 0) teacher_leaves = Index{1} << 20;
  if (refine_leaves == 0) refine_leaves = paper ? 4096 : 512;
  if (refine_epochs == 0) refine_epochs = 50;
  if (refine_batch == 0) refine_batch = 64;
  if (refine_step <= 0.0) refine_step = 0.001;
  if (grid.empty()) grid = default_grid(protocol, paper);
  if (grid.empty()) throw std::runtime_error("config: grid is empty");
  if (protocol != Protocol::lambda_sweep)
    for (double v : grid)
      if (v < 2.0) throw std::runtime_error("config: leaf budgets must be >= 2");
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_number) +
                               ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "dataset") cfg.dataset = value;
    else if (key == "protocol") cfg.protocol = protocol_from_name(value);
    else if (key == "scale") cfg.scale = value;
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "folds") cfg.folds = std::stoi(value);
    else if (key == "trees") cfg.trees = std::stol(value);
    else if (key == "manifest") cfg.manifest = value;
    else if (key == "output") cfg.output = value;
    else if (key == "augment_copies") cfg.augment_copies = std::stol(value);
    else if (key == "augment_noise") cfg.augment_noise = std::stod(value);
    else if (key == "teacher_leaves") cfg.teacher_leaves = std::stol(value);
    else if (key == "refine_leaves") cfg.refine_leaves = std::stol(value);
    else if (key == "refine_epochs") cfg.refine_epochs = std::stol(value);
    else if (key == "refine_batch") cfg.refine_batch = std::stol(value);
    else if (key == "refine_step") cfg.refine_step = std::stod(value);
    else if (key == "record_timing") cfg.record_timing = value == "true" || value == "1";
    else if (key == "grid") {
      cfg.grid.clear();
      std::string token;
      std::stringstream values(value);
      while (values >> token) {
        if (!token.empty() && token.back() == ',') token.pop_back();
        if (!token.empty()) cfg.grid.push_back(std::stod(token));
      }
    } else {
      throw std::runtime_error("config line " + std::to_string(line_number) +
                               ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

nlohmann::json ExperimentConfig::to_json() const {
  return {{"dataset", dataset},
          {"protocol", protocol_name(protocol)},
          {"scale", scale},
          {"seed", seed},
          {"folds", folds},
          {"trees", trees},
          {"grid", grid},
          {"manifest", manifest},
          {"output", output},
          {"augment_copies", augment_copies},
          {"augment_noise", augment_noise},
          {"teacher_leaves", teacher_leaves},
          {"refine_leaves", refine_leaves},
          {"refine_epochs", refine_epochs},
          {"refine_batch", refine_batch},
          {"refine_step", refine_step},
          {"record_timing", record_timing}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc) {
  ExperimentConfig cfg;
  cfg.dataset = doc.at("dataset").get<std::string>();
  cfg.protocol = protocol_from_name(doc.at("protocol").get<std::string>());
  cfg.scale = doc.at("scale").get<std::string>();
  cfg.seed = doc.at("seed").get<std::uint64_t>();
  cfg.folds = doc.at("folds").get<int>();
  cfg.trees = doc.at("trees").get<Index>();
  cfg.grid = doc.at("grid").get<std::vector<double>>();
  cfg.manifest = doc.at("manifest").get<std::string>();
  cfg.output = doc.at("output").get<std::string>();
  cfg.augment_copies = doc.at("augment_copies").get<Index>();
  cfg.augment_noise = doc.at("augment_noise").get<double>();
  cfg.teacher_leaves = doc.at("teacher_leaves").get<Index>();
  cfg.refine_leaves = doc.at("refine_leaves").get<Index>();
  cfg.refine_epochs = doc.at("refine_epochs").get<Index>();
  cfg.refine_batch = doc.at("refine_batch").get<Index>();
  cfg.refine_step = doc.at("refine_step").get<double>();
  cfg.record_timing = doc.at("record_timing").get<bool>();
  return cfg;
}

ExperimentConfig config_from_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open run manifest '" + path + "'");
  return ExperimentConfig::from_json(nlohmann::json::parse(in).at("config"));
}

namespace {

struct SweepContext {
  const ExperimentConfig& cfg;
  Dataset ds;
  FoldSpec folds;

  explicit SweepContext(const ExperimentConfig& config)
      : cfg(config),
        ds(load_dataset(config.manifest, config.dataset)),
        folds(stratified_kfold(ds, config.folds,
                               derive_seed(config.seed, 0xf01d))) {}

  std::uint64_t cell_seed(int fold, std::size_t grid_index, std::uint64_t salt) const {
    return derive_seed(cfg.seed,
                       std::uint64_t(fold) * 1000003ULL + grid_index, salt);
  }

  ResultRow base_row(int fold, const std::string& model,
                     std::optional<double> grid_value) const {
    ResultRow row;
    row.dataset = cfg.dataset;
    row.fold = fold;
    row.protocol = protocol_name(cfg.protocol);
    row.model = model;
    row.grid_value = grid_value;
    return row;
  }

  nlohmann::json info() const {
    return {{"name", ds.name()},
            {"rows", ds.n()},
            {"features", ds.dim()},
            {"classes", ds.classes()}};
  }
};

void fill_complexity(ResultRow& row, const ComplexityReport& report) {
  row.ensemble_rademacher = report.ensemble_rademacher;
  row.avg_height = report.avg_height;
}

void fill_diversity(ResultRow& row, const DiversityReport& report) {
  row.avg_member_mse = report.avg_member_mse;
  row.diversity = report.diversity;
  row.ensemble_mse = report.ensemble_mse;
  if (report.cbound_defined) row.cbound = report.cbound;
}

Forest as_forest(DecisionTree tree) {
  Forest f;
  f.trees.push_back(std::move(tree));
  f.weights.push_back(1.0);
  return f;
}

}  // namespace

SweepResult run_complexity_sweep(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  SweepContext ctx(cfg);
  SweepResult result;
  result.config = cfg;
  result.dataset_info = ctx.info();

  for (int fold = 0; fold < cfg.folds; ++fold) {
    const IndexVector train = ctx.folds.train_indices(fold);
    const IndexVector test = ctx.folds.test_indices(fold);

    for (std::size_t gi = 0; gi < cfg.grid.size(); ++gi) {
      const Index budget = static_cast<Index>(cfg.grid[gi]);
      const std::string cell = protocol_name(cfg.protocol) + "/fold" +
                               std::to_string(fold) + "/n_l" + std::to_string(budget);
      try {
        const auto cell_start = Clock::now();
        GrowConfig dt_cfg{budget, ctx.ds.dim(), 1, ctx.cell_seed(fold, gi, 0x0d7)};
        const DecisionTree dt = grow_tree(ctx.ds, train, dt_cfg);

        ResultRow dt_row = ctx.base_row(fold, "DT", cfg.grid[gi]);
        dt_row.train_error = error_01(dt, ctx.ds, train);
        dt_row.test_error = error_01(dt, ctx.ds, test);
        fill_complexity(dt_row, ensemble_rademacher(as_forest(dt),
                                                    static_cast<Index>(train.size())));
        if (cfg.record_timing) dt_row.wall_time = seconds_since(cell_start);
        result.rows.push_back(std::move(dt_row));

        const auto rf_start = Clock::now();
        ForestConfig rf_cfg;
        rf_cfg.n_trees = cfg.trees;
        rf_cfg.grow = GrowConfig{budget, sqrt_feature_budget(ctx.ds.dim()), 1,
                                 ctx.cell_seed(fold, gi, 0x2f1)};
        rf_cfg.bootstrap = true;
        rf_cfg.seed = ctx.cell_seed(fold, gi, 0x2f2);
        const Forest rf = train_rf(ctx.ds, train, rf_cfg);

        ResultRow rf_row = ctx.base_row(fold, "RF", cfg.grid[gi]);
        rf_row.train_error = error_01(rf, ctx.ds, train);
        rf_row.test_error = error_01(rf, ctx.ds, test);
        fill_complexity(rf_row,
                        ensemble_rademacher(rf, static_cast<Index>(train.size())));
        if (cfg.record_timing) rf_row.wall_time = seconds_since(rf_start);
        result.rows.push_back(std::move(rf_row));
      } catch (const std::exception& e) {
        result.failed_cells.push_back(cell + ": " + e.what());
      }
    }
  }
  result.total_seconds = seconds_since(start);
  return result;
}

SweepResult run_da_sweep(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  SweepContext ctx(cfg);
  SweepResult result;
  result.config = cfg;
  result.dataset_info = ctx.info();

  for (int fold = 0; fold < cfg.folds; ++fold) {
    const IndexVector train = ctx.folds.train_indices(fold);
    const IndexVector test = ctx.folds.test_indices(fold);

    // Saturated teachers, trained once per fold and reused across the grid.
    ForestConfig rf_teacher_cfg;
    rf_teacher_cfg.n_trees = cfg.trees;
    rf_teacher_cfg.grow = GrowConfig{cfg.teacher_leaves,
                                     sqrt_feature_budget(ctx.ds.dim()), 1,
                                     ctx.cell_seed(fold, 0, 0xda1)};
    rf_teacher_cfg.seed = ctx.cell_seed(fold, 0, 0xda2);
    const Forest rf_teacher = train_rf(ctx.ds, train, rf_teacher_cfg);

    GrowConfig dt_teacher_cfg{cfg.teacher_leaves, ctx.ds.dim(), 1,
                              ctx.cell_seed(fold, 0, 0xda3)};
    const DecisionTree dt_teacher = grow_tree(ctx.ds, train, dt_teacher_cfg);

    const AugmentConfig aug_rf{cfg.augment_copies, cfg.augment_noise,
                               ctx.cell_seed(fold, 0, 0xda4)};
    const AugmentConfig aug_dt{cfg.augment_copies, cfg.augment_noise,
                               ctx.cell_seed(fold, 0, 0xda5)};
    const Dataset from_rf = augment(ctx.ds, train, scorer_of(rf_teacher), aug_rf);
    const Dataset from_dt = augment(ctx.ds, train, scorer_of(dt_teacher), aug_dt);
    IndexVector all_aug(from_rf.n());
    std::iota(all_aug.begin(), all_aug.end(), Index{0});

    for (std::size_t gi = 0; gi < cfg.grid.size(); ++gi) {
      const Index budget = static_cast<Index>(cfg.grid[gi]);
      const std::string cell = protocol_name(cfg.protocol) + "/fold" +
                               std::to_string(fold) + "/n_l" + std::to_string(budget);
      try {
        const auto dt_start = Clock::now();
        GrowConfig student_dt{budget, ctx.ds.dim(), 1, ctx.cell_seed(fold, gi, 0xda6)};
        const DecisionTree da_dt = grow_tree(from_rf, all_aug, student_dt);

        ResultRow dt_row = ctx.base_row(fold, "DA-DT", cfg.grid[gi]);
        dt_row.train_error = error_01(da_dt, ctx.ds, train);
        dt_row.test_error = error_01(da_dt, ctx.ds, test);
        fill_complexity(dt_row, ensemble_rademacher(as_forest(da_dt), from_rf.n()));
        if (cfg.record_timing) dt_row.wall_time = seconds_since(dt_start);
        result.rows.push_back(std::move(dt_row));

        const auto rf_start = Clock::now();
        ForestConfig student_rf;
        student_rf.n_trees = cfg.trees;
        student_rf.grow = GrowConfig{budget, sqrt_feature_budget(ctx.ds.dim()), 1,
                                     ctx.cell_seed(fold, gi, 0xda7)};
        student_rf.seed = ctx.cell_seed(fold, gi, 0xda8);
        const Forest da_rf = train_rf(from_dt, all_aug, student_rf);

        ResultRow rf_row = ctx.base_row(fold, "DA-RF", cfg.grid[gi]);
        rf_row.train_error = error_01(da_rf, ctx.ds, train);
        rf_row.test_error = error_01(da_rf, ctx.ds, test);
        fill_complexity(rf_row, ensemble_rademacher(da_rf, from_dt.n()));
        if (cfg.record_timing) rf_row.wall_time = seconds_since(rf_start);
        result.rows.push_back(std::move(rf_row));
      } catch (const std::exception& e) {
        result.failed_cells.push_back(cell + ": " + e.what());
      }
    }
  }
  result.total_seconds = seconds_since(start);
  return result;
}

SweepResult run_lambda_sweep(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  SweepContext ctx(cfg);
  SweepResult result;
  result.config = cfg;
  result.dataset_info = ctx.info();
  result.diagnostics["member_errors"] = nlohmann::json::array();

  for (int fold = 0; fold < cfg.folds; ++fold) {
    const IndexVector train = ctx.folds.train_indices(fold);
    const IndexVector test = ctx.folds.test_indices(fold);

    ForestConfig base_cfg;
    base_cfg.n_trees = cfg.trees;
    base_cfg.grow = GrowConfig{cfg.refine_leaves, sqrt_feature_budget(ctx.ds.dim()),
                               1, ctx.cell_seed(fold, 0, 0x1a1)};
    base_cfg.seed = ctx.cell_seed(fold, 0, 0x1a2);
    const Forest base = train_rf(ctx.ds, train, base_cfg);
    const ComplexityReport base_report =
        ensemble_rademacher(base, static_cast<Index>(train.size()));

    {  // unrefined reference point; grid cell left empty
      const DiversityReport train_side = diversity_report(base, ctx.ds, train);
      const DiversityReport test_side = diversity_report(base, ctx.ds, test);
      ResultRow ref = ctx.base_row(fold, "RF", std::nullopt);
      ref.train_error = error_01(base, ctx.ds, train);
      ref.test_error = error_01(base, ctx.ds, test);
      fill_complexity(ref, base_report);
      fill_diversity(ref, train_side);
      result.rows.push_back(std::move(ref));
      result.diagnostics["member_errors"].push_back(
          {{"fold", fold},
           {"lambda", nullptr},
           {"member_01_train", train_side.avg_member_01},
           {"member_01_test", test_side.avg_member_01}});
    }

    struct Cell {
      ResultRow row;
      std::string trace;
      double member_train = 0.0, member_test = 0.0;
      std::string failure;
    };
    std::vector<Cell> cells(cfg.grid.size());

    parallel_for(cfg.grid.size(), [&](std::size_t li) {
      const double lambda = cfg.grid[li];
      Cell& cell = cells[li];
      try {
        const auto cell_start = Clock::now();
        Forest refined = base;
        NclConfig ncl;
        ncl.lambda = lambda;
        ncl.step_size = cfg.refine_step;
        ncl.batch_size = cfg.refine_batch;
        ncl.epochs = cfg.refine_epochs;
        ncl.seed = ctx.cell_seed(fold, li, 0x1a3);
        const RefineTrace trace = refine(refined, ctx.ds, train, ncl);

        cell.row = ctx.base_row(fold, "NCF", lambda);
        cell.row.train_error = error_01(refined, ctx.ds, train);
        cell.row.test_error = error_01(refined, ctx.ds, test);
        fill_complexity(cell.row, base_report);  // structure unchanged
        const DiversityReport train_side = diversity_report(refined, ctx.ds, train);
        fill_diversity(cell.row, train_side);
        cell.member_train = train_side.avg_member_01;
        cell.member_test = diversity_report(refined, ctx.ds, test).avg_member_01;
        if (cfg.record_timing) cell.row.wall_time = seconds_since(cell_start);

        std::string lines;
        for (const auto& stats : trace) {
          nlohmann::json line = {{"epoch", stats.epoch},
                                 {"lambda", lambda},
                                 {"ncl_loss", stats.ncl_loss},
                                 {"avg_member_mse", stats.avg_member_mse},
                                 {"diversity", stats.diversity},
                                 {"ensemble_mse", stats.ensemble_mse}};
          lines += line.dump();
          lines += '\n';
        }
        cell.trace = std::move(lines);
      } catch (const std::exception& e) {
        cell.failure = protocol_name(cfg.protocol) + "/fold" + std::to_string(fold) +
                       "/lambda" + format_double(lambda) + ": " + e.what();
      }
    });

    std::string fold_trace;
    for (std::size_t li = 0; li < cells.size(); ++li) {
      Cell& cell = cells[li];
      if (!cell.failure.empty()) {
        result.failed_cells.push_back(cell.failure);
        continue;
      }
      result.rows.push_back(std::move(cell.row));
      fold_trace += cell.trace;
      result.diagnostics["member_errors"].push_back(
          {{"fold", fold},
           {"lambda", cfg.grid[li]},
           {"member_01_train", cell.member_train},
           {"member_01_test", cell.member_test}});
    }
    result.extra_files["trace_fold" + std::to_string(fold) + ".jsonl"] = fold_trace;
  }
  result.total_seconds = seconds_since(start);
  return result;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  switch (cfg.protocol) {
    case Protocol::complexity_sweep: return run_complexity_sweep(cfg);
    case Protocol::da_sweep: return run_da_sweep(cfg);
    case Protocol::lambda_sweep: return run_lambda_sweep(cfg);
  }
  throw std::logic_error("unreachable");
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::string out = kRowHeader;
  out += '\n';
  for (const auto& row : rows) {
    out += row.dataset;
    out += ',';
    out += std::to_string(row.fold);
    out += ',';
    out += row.protocol;
    out += ',';
    out += row.model;
    out += ',';
    out += format_optional(row.grid_value);
    out += ',';
    out += format_double(row.train_error);
    out += ',';
    out += format_double(row.test_error);
    out += ',';
    out += format_double(row.ensemble_rademacher);
    out += ',';
    out += format_double(row.avg_height);
    out += ',';
    out += format_optional(row.avg_member_mse);
    out += ',';
    out += format_optional(row.diversity);
    out += ',';
    out += format_optional(row.ensemble_mse);
    out += ',';
    out += format_optional(row.cbound);
    out += ',';
    out += format_optional(row.wall_time);
    out += '\n';
  }
  return out;
}

std::vector<ResultRow> rows_from_csv(const std::string& text) {
  std::stringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kRowHeader)
    throw std::runtime_error("result CSV: unexpected header");

  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    while (cells.size() < 14) cells.push_back("");
    if (cells.size() != 14)
      throw std::runtime_error("result CSV: wrong cell count in row");

    ResultRow row;
    row.dataset = cells[0];
    row.fold = std::stoi(cells[1]);
    row.protocol = cells[2];
    row.model = cells[3];
    auto opt = [](const std::string& s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return parse_double(s);
    };
    row.grid_value = opt(cells[4]);
    row.train_error = parse_double(cells[5]);
    row.test_error = parse_double(cells[6]);
    row.ensemble_rademacher = parse_double(cells[7]);
    row.avg_height = parse_double(cells[8]);
    row.avg_member_mse = opt(cells[9]);
    row.diversity = opt(cells[10]);
    row.ensemble_mse = opt(cells[11]);
    row.cbound = opt(cells[12]);
    row.wall_time = opt(cells[13]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string summarize_csv(const std::vector<ResultRow>& rows) {
  struct Group {
    std::string dataset, protocol, model, grid;
    int count = 0;
    double train = 0, test = 0, rademacher = 0, height = 0;
    double member_mse = 0, diversity = 0, ensemble_mse = 0, cbound = 0;
    int member_mse_n = 0, diversity_n = 0, ensemble_mse_n = 0, cbound_n = 0;
  };

  std::vector<Group> groups;
  auto find_group = [&](const ResultRow& row) -> Group& {
    const std::string grid = format_optional(row.grid_value);
    for (auto& g : groups)
      if (g.protocol == row.protocol && g.model == row.model && g.grid == grid &&
          g.dataset == row.dataset)
        return g;
    groups.push_back(Group{row.dataset, row.protocol, row.model, grid});
    return groups.back();
  };

  for (const auto& row : rows) {
    Group& g = find_group(row);
    ++g.count;
    g.train += row.train_error;
    g.test += row.test_error;
    g.rademacher += row.ensemble_rademacher;
    g.height += row.avg_height;
    if (row.avg_member_mse) { g.member_mse += *row.avg_member_mse; ++g.member_mse_n; }
    if (row.diversity) { g.diversity += *row.diversity; ++g.diversity_n; }
    if (row.ensemble_mse) { g.ensemble_mse += *row.ensemble_mse; ++g.ensemble_mse_n; }
    if (row.cbound) { g.cbound += *row.cbound; ++g.cbound_n; }
  }

  std::string out =
      "dataset,protocol,model,grid_value,folds,train_error,test_error,"
      "ensemble_rademacher,avg_height,avg_member_mse,diversity,ensemble_mse,cbound\n";
  auto mean_cell = [](double sum, int n) {
    return n > 0 ? format_double(sum / double(n)) : std::string();
  };
  for (const auto& g : groups) {
    out += g.dataset + ',' + g.protocol + ',' + g.model + ',' + g.grid + ',';
    out += std::to_string(g.count);
    out += ',' + mean_cell(g.train, g.count) + ',' + mean_cell(g.test, g.count);
    out += ',' + mean_cell(g.rademacher, g.count) + ',' + mean_cell(g.height, g.count);
    out += ',' + mean_cell(g.member_mse, g.member_mse_n);
    out += ',' + mean_cell(g.diversity, g.diversity_n);
    out += ',' + mean_cell(g.ensemble_mse, g.ensemble_mse_n);
    out += ',' + mean_cell(g.cbound, g.cbound_n);
    out += '\n';
  }
  return out;
}

std::vector<std::string> emit(const SweepResult& result, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir))
    throw std::runtime_error("emit: cannot create output directory '" + dir + "'");

  std::vector<std::string> written;
  auto write_file = [&](const std::string& name, const std::string& content) {
    const auto path = (fs::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit: cannot write '" + path + "'");
    out << content;
    written.push_back(path);
  };

  write_file("rows.csv", rows_to_csv(result.rows));
  write_file("summary.csv", summarize_csv(result.rows));
  for (const auto& [name, content] : result.extra_files) write_file(name, content);

  nlohmann::json manifest = {
      {"config", result.config.to_json()},
      {"dataset", result.dataset_info},
      {"versions",
       {{"forestlab", "0.1.0"},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                      std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
        {"compiler", __VERSION__}}},
      {"diagnostics", result.diagnostics},
      {"failed_cells", result.failed_cells},
      {"timing_seconds", result.total_seconds}};
  write_file("manifest.json", manifest.dump(2) + "\n");
  return written;
}

}  // namespace forestlab
