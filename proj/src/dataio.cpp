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

#include "forestlab/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace forestlab {

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double parse_numeric(const std::string& cell, Index row_number,
                     const std::string& column) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(cell, &pos);
    if (pos != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("row " + std::to_string(row_number) +
                             ": cell '" + cell + "' in numeric column '" +
                             column + "' is not a number");
  }
}

}  // namespace

Index RawTable::label_column() const {
  for (Index c = 0; c < static_cast<Index>(column_kinds.size()); ++c)
    if (column_kinds[c] == ColumnKind::label) return c;
  throw std::runtime_error("table '" + name + "' has no label column");
}

bool is_missing_cell(const std::string& cell) {
  if (cell.empty() || cell == "?" || cell == "NA") return true;
  std::string lower(cell);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return lower == "nan";
}

RawTable parse_table(const std::string& text, const ColumnSchema& schema,
                     const std::string& name) {
  std::stringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("'" + name + "': no data rows");

  RawTable table;
  table.name = name;
  table.column_names = split_csv_line(line);
  if (table.column_names.empty())
    throw std::runtime_error("'" + name + "': empty header");

  int labels = 0;
  for (const auto& column : table.column_names) {
    auto it = schema.find(column);
    if (it == schema.end())
      throw std::runtime_error("'" + name + "': unknown column '" + column +
                               "' (not covered by the schema)");
    table.column_kinds.push_back(it->second);
    labels += it->second == ColumnKind::label ? 1 : 0;
  }
  if (labels != 1)
    throw std::runtime_error("'" + name + "': expected exactly one label column, got " +
                             std::to_string(labels));

  const std::size_t arity = table.column_names.size();
  Index row_number = 1;  // header was row 1
  while (std::getline(in, line)) {
    ++row_number;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != arity)
      throw std::runtime_error("'" + name + "': row " + std::to_string(row_number) +
                               " has " + std::to_string(cells.size()) +
                               " cells, expected " + std::to_string(arity));
    table.rows.push_back(std::move(cells));
  }
  if (table.rows.empty())
    throw std::runtime_error("'" + name + "': no data rows");
  return table;
}

RawTable load_table(const std::string& path, const ColumnSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_table(buffer.str(), schema,
                     std::filesystem::path(path).stem().string());
}

Dataset::Dataset(Matrix x, Matrix y, std::vector<std::string> feature_names,
                 std::vector<std::string> class_names, std::string name)
    : x_(std::move(x)),
      y_(std::move(y)),
      feature_names_(std::move(feature_names)),
      class_names_(std::move(class_names)),
      name_(std::move(name)) {
  if (x_.rows() != y_.rows())
    throw std::invalid_argument("dataset: X and Y row counts differ");
  if (x_.rows() < 1 || x_.cols() < 1 || y_.cols() < 2)
    throw std::invalid_argument("dataset: need N >= 1, d >= 1, C >= 2");
  if (!x_.allFinite())
    throw std::invalid_argument("dataset: X contains non-finite values");
  for (Index i = 0; i < y_.rows(); ++i) {
    double sum = 0.0;
    for (Index c = 0; c < y_.cols(); ++c) {
      const double v = y_(i, c);
      if (v != 0.0 && v != 1.0)
        throw std::invalid_argument("dataset: Y is not one-hot");
      sum += v;
    }
    if (sum != 1.0) throw std::invalid_argument("dataset: Y rows must sum to 1");
  }
}

Index Dataset::label_of(Index i) const { return argmax_lowest(y_.row(i)); }

Vector Dataset::binary_labels() const {
  if (classes() != 2)
    throw std::logic_error("binary_labels: dataset has " +
                           std::to_string(classes()) + " classes, expected 2");
  return y_.col(1) - y_.col(0);
}

Dataset preprocess(const RawTable& raw) {
  const Index cols = static_cast<Index>(raw.column_names.size());
  const Index label_col = raw.label_column();

  std::vector<Index> kept;
  for (Index i = 0; i < static_cast<Index>(raw.rows.size()); ++i) {
    const auto& row = raw.rows[i];
    if (std::none_of(row.begin(), row.end(), is_missing_cell))
      kept.push_back(i);
  }
  if (kept.empty())
    throw std::runtime_error("'" + raw.name + "': all rows contain missing values");

  // Category vocabularies, lexicographically ordered for determinism.
  std::vector<std::vector<std::string>> categories(cols);
  std::vector<std::string> class_names;
  for (Index c = 0; c < cols; ++c) {
    if (raw.column_kinds[c] == ColumnKind::numeric) continue;
    std::set<std::string> values;
    for (Index i : kept) values.insert(raw.rows[i][c]);
    if (c == label_col) {
      class_names.assign(values.begin(), values.end());
    } else {
      categories[c].assign(values.begin(), values.end());
    }
  }
  if (class_names.size() < 2)
    throw std::runtime_error("'" + raw.name + "': label column has " +
                             std::to_string(class_names.size()) +
                             " distinct classes, need at least 2");

  Index d = 0;
  std::vector<std::string> feature_names;
  for (Index c = 0; c < cols; ++c) {
    if (c == label_col) continue;
    if (raw.column_kinds[c] == ColumnKind::numeric) {
      feature_names.push_back(raw.column_names[c]);
      ++d;
    } else {
      for (const auto& value : categories[c])
        feature_names.push_back(raw.column_names[c] + "=" + value);
      d += static_cast<Index>(categories[c].size());
    }
  }

  const Index n = static_cast<Index>(kept.size());
  const Index n_classes = static_cast<Index>(class_names.size());
  Matrix x = Matrix::Zero(n, d);
  Matrix y = Matrix::Zero(n, n_classes);

  for (Index out = 0; out < n; ++out) {
    const auto& row = raw.rows[kept[out]];
    Index f = 0;
    for (Index c = 0; c < cols; ++c) {
      if (c == label_col) continue;
      if (raw.column_kinds[c] == ColumnKind::numeric) {
        const double v = parse_numeric(row[c], kept[out] + 2, raw.column_names[c]);
        if (!std::isfinite(v))
          throw std::runtime_error("'" + raw.name + "': non-finite numeric cell in row " +
                                   std::to_string(kept[out] + 2));
        x(out, f++) = v;
      } else {
        const auto& vocab = categories[c];
        const auto it = std::lower_bound(vocab.begin(), vocab.end(), row[c]);
        x(out, f + (it - vocab.begin())) = 1.0;
        f += static_cast<Index>(vocab.size());
      }
    }
    const auto cls = std::lower_bound(class_names.begin(), class_names.end(),
                                      row[label_col]);
    y(out, cls - class_names.begin()) = 1.0;
  }

  return Dataset(std::move(x), std::move(y), std::move(feature_names),
                 std::move(class_names), raw.name);
}

FoldSpec stratified_kfold(const Dataset& ds, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("stratified_kfold: k must be >= 2");

  std::vector<IndexVector> by_class(ds.classes());
  for (Index i = 0; i < ds.n(); ++i) by_class[ds.label_of(i)].push_back(i);

  for (Index c = 0; c < ds.classes(); ++c)
    if (static_cast<int>(by_class[c].size()) < k)
      throw std::runtime_error("stratified_kfold: class '" + ds.class_names()[c] +
                               "' has " + std::to_string(by_class[c].size()) +
                               " members, fewer than k=" + std::to_string(k));

  FoldSpec spec;
  spec.k = k;
  spec.seed = seed;
  spec.assignments.assign(ds.n(), -1);
  for (Index c = 0; c < ds.classes(); ++c) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
    auto& members = by_class[c];
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t j = 0; j < members.size(); ++j)
      spec.assignments[members[j]] = static_cast<int>(j % k);
  }
  return spec;
}

IndexVector FoldSpec::test_indices(int fold) const {
  IndexVector out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] == fold) out.push_back(static_cast<Index>(i));
  return out;
}

IndexVector FoldSpec::train_indices(int fold) const {
  IndexVector out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] != fold) out.push_back(static_cast<Index>(i));
  return out;
}

std::vector<DatasetSpec> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest '" + path + "'");
  nlohmann::json doc = nlohmann::json::parse(in);

  const auto base = std::filesystem::path(path).parent_path();
  std::vector<DatasetSpec> specs;
  for (const auto& entry : doc.at("datasets")) {
    DatasetSpec spec;
    spec.name = entry.at("name").get<std::string>();
    spec.path = (base / entry.at("path").get<std::string>()).string();
    for (const auto& [column, kind] : entry.at("columns").items()) {
      if (kind == "numeric") spec.schema[column] = ColumnKind::numeric;
      else if (kind == "categorical") spec.schema[column] = ColumnKind::categorical;
      else if (kind == "label") spec.schema[column] = ColumnKind::label;
      else throw std::runtime_error("manifest '" + path + "': unknown column kind '" +
                                    kind.get<std::string>() + "'");
    }
    specs.push_back(std::move(spec));
  }
  return specs;
}

Dataset load_dataset(const std::string& manifest_path, const std::string& name) {
  for (const auto& spec : load_manifest(manifest_path)) {
    if (spec.name != name) continue;
    RawTable table = load_table(spec.path, spec.schema);
    table.name = name;
    return preprocess(table);
  }
  throw std::runtime_error("dataset '" + name + "' not found in manifest '" +
                           manifest_path + "'");
}

}  // namespace forestlab
