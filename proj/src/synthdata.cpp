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

#include "forestlab/synthdata.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace forestlab {

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

}  // namespace

SynthSpec synth_preset(const std::string& kind, std::uint64_t seed) {
  SynthSpec spec;
  spec.seed = seed;
  if (kind == "magic") {
    // Telescope-like: 10 continuous features, noticeable label noise so a
    // saturated tree memorizes wrong labels while the forest averages them out.
    spec.name = "magic";
    spec.rows = 6000;
    spec.numeric_features = 10;
    spec.clusters_per_class = 6;
    spec.cluster_sigma = 0.16;
    spec.flip_fraction = 0.14;
    spec.class1_fraction = 0.35;
    spec.class_names = {"g", "h"};
  } else if (kind == "eeg") {
    // Eye-state-like: 14 continuous features, low noise, tangled clusters.
    spec.name = "eeg";
    spec.rows = 2500;
    spec.numeric_features = 14;
    spec.clusters_per_class = 8;
    spec.cluster_sigma = 0.15;
    spec.flip_fraction = 0.02;
    spec.class1_fraction = 0.45;
    spec.class_names = {"closed", "open"};
  } else if (kind == "tiny") {
    spec.name = "tiny";
    spec.rows = 400;
    spec.numeric_features = 3;
    spec.clusters_per_class = 2;
    spec.cluster_sigma = 0.2;
    spec.flip_fraction = 0.05;
    spec.class1_fraction = 0.5;
    spec.class_names = {"a", "b"};
    spec.categorical_values = 3;
  } else {
    throw std::invalid_argument("unknown dataset preset '" + kind + "'");
  }
  return spec;
}

RawTable synth_table(const SynthSpec& spec) {
  if (spec.rows < 1 || spec.numeric_features < 1 || spec.clusters_per_class < 1)
    throw std::invalid_argument("synth_table: degenerate specification");
  if (spec.class_names.size() != 2)
    throw std::invalid_argument("synth_table: exactly two classes supported");

  Rng rng(derive_seed(spec.seed, 0x5d47));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> jitter(0.0, spec.cluster_sigma);

  const Index d = spec.numeric_features;
  std::vector<std::vector<Vector>> centers(2);
  for (int c = 0; c < 2; ++c)
    for (Index k = 0; k < spec.clusters_per_class; ++k) {
      Vector center(d);
      for (Index j = 0; j < d; ++j) center[j] = unit(rng);
      centers[c].push_back(std::move(center));
    }

  RawTable table;
  table.name = spec.name;
  for (Index j = 0; j < d; ++j) {
    table.column_names.push_back("f" + std::to_string(j));
    table.column_kinds.push_back(ColumnKind::numeric);
  }
  if (spec.categorical_values > 0) {
    table.column_names.push_back("site");
    table.column_kinds.push_back(ColumnKind::categorical);
  }
  table.column_names.push_back("class");
  table.column_kinds.push_back(ColumnKind::label);

  std::uniform_int_distribution<Index> pick_cluster(0, spec.clusters_per_class - 1);
  for (Index i = 0; i < spec.rows; ++i) {
    const int label = unit(rng) < spec.class1_fraction ? 1 : 0;
    const Index cluster = pick_cluster(rng);
    const Vector& center = centers[label][cluster];

    std::vector<std::string> row;
    row.reserve(table.column_names.size());
    for (Index j = 0; j < d; ++j)
      row.push_back(format_double(center[j] + jitter(rng)));
    if (spec.categorical_values > 0) {
      const Index site = (label * spec.clusters_per_class + cluster) %
                         spec.categorical_values;
      row.push_back("s" + std::to_string(site));
    }
    const bool flip = unit(rng) < spec.flip_fraction;
    row.push_back(spec.class_names[flip ? 1 - label : label]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string to_csv(const RawTable& table) {
  std::string out;
  for (std::size_t c = 0; c < table.column_names.size(); ++c) {
    if (c) out += ',';
    out += table.column_names[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += row[c];
    }
    out += '\n';
  }
  return out;
}

std::string write_datasets(const std::string& dir,
                           const std::vector<std::string>& kinds,
                           std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["datasets"] = nlohmann::json::array();

  for (const auto& kind : kinds) {
    const RawTable table = synth_table(synth_preset(kind, seed));
    const std::string file = kind + ".csv";
    std::ofstream csv(std::filesystem::path(dir) / file, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write dataset '" + file + "'");
    csv << to_csv(table);

    nlohmann::json columns;
    for (std::size_t c = 0; c < table.column_names.size(); ++c) {
      const char* kind_name = table.column_kinds[c] == ColumnKind::numeric
                                  ? "numeric"
                                  : table.column_kinds[c] == ColumnKind::categorical
                                        ? "categorical"
                                        : "label";
      columns[table.column_names[c]] = kind_name;
    }
    manifest["datasets"].push_back(
        {{"name", kind}, {"path", file}, {"columns", columns}});
  }

  const auto manifest_path = (std::filesystem::path(dir) / "manifest.json").string();
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest");
  out << manifest.dump(2) << "\n";
  return manifest_path;
}

}  // namespace forestlab
