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
#include <string>
#include <vector>

#include "forestlab/types.hpp"

namespace forestlab {

enum class ColumnKind { numeric, categorical, label };

/// Parsed but not yet encoded tabular data. All rows have the same arity and
/// exactly one column is tagged as the label.
struct RawTable {
  std::string name;
  std::vector<std::string> column_names;
  std::vector<ColumnKind> column_kinds;
  std::vector<std::vector<std::string>> rows;

  Index label_column() const;
};

/// Fully numeric training data: X holds finite reals, Y is one-hot.
class Dataset {
 public:
  Dataset() = default;
  Dataset(Matrix x, Matrix y, std::vector<std::string> feature_names,
          std::vector<std::string> class_names, std::string name);

  Index n() const { return x_.rows(); }
  Index dim() const { return x_.cols(); }
  Index classes() const { return y_.cols(); }
  const Matrix& x() const { return x_; }
  const Matrix& y() const { return y_; }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<std::string>& class_names() const { return class_names_; }

  /// Class index of row i (position of the '1' in the one-hot row).
  Index label_of(Index i) const;

  /// {-1,+1} scalar view of the labels; class 0 maps to -1, class 1 to +1.
  /// Only defined for two-class data.
  Vector binary_labels() const;

 private:
  Matrix x_;
  Matrix y_;
  std::vector<std::string> feature_names_;
  std::vector<std::string> class_names_;
  std::string name_;
};

/// Fold assignment for stratified k-fold cross validation.
struct FoldSpec {
  int k = 0;
  std::vector<int> assignments;  // length N, values in [0, k)
  std::uint64_t seed = 0;

  IndexVector test_indices(int fold) const;
  IndexVector train_indices(int fold) const;
};

/// Column-kind schema keyed by column name. Must cover every column of the
/// file being loaded.
using ColumnSchema = std::map<std::string, ColumnKind>;

/// Reads a comma-separated file with a header row. Cells equal to "", "?",
/// "NA" or "NaN" (case-insensitive) are kept verbatim and later treated as
/// missing by preprocess().
RawTable load_table(const std::string& path, const ColumnSchema& schema);

/// Parses CSV text that is already in memory; load_table delegates here.
RawTable parse_table(const std::string& text, const ColumnSchema& schema,
                     const std::string& name);

bool is_missing_cell(const std::string& cell);

/// Drops rows containing missing cells, one-hot encodes categorical columns
/// (one indicator per observed category, ordered lexicographically) and
/// one-hot encodes the label column.
Dataset preprocess(const RawTable& raw);

/// Deterministic stratified k-fold split: indices of each class are shuffled
/// with the seed and dealt round-robin into folds.
FoldSpec stratified_kfold(const Dataset& ds, int k, std::uint64_t seed);

/// An entry of the dataset manifest: where a named dataset lives and how its
/// columns are typed.
struct DatasetSpec {
  std::string name;
  std::string path;  // resolved against the manifest's directory
  ColumnSchema schema;
};

std::vector<DatasetSpec> load_manifest(const std::string& path);

/// Loads and preprocesses the named dataset from a manifest file.
Dataset load_dataset(const std::string& manifest_path, const std::string& name);

}  // namespace forestlab
