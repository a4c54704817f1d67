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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "forestlab/dataio.hpp"
#include "forestlab/synthdata.hpp"

using namespace forestlab;

namespace {

ColumnSchema two_numeric_schema() {
  return {{"a", ColumnKind::numeric},
          {"b", ColumnKind::numeric},
          {"class", ColumnKind::label}};
}

}  // namespace

TEST_CASE("parse_table reads a small csv") {
  const auto table = parse_table("a,b,class\n1,2,x\n3,4,y\n5,6,x\n",
                                 two_numeric_schema(), "t");
  CHECK(table.rows.size() == 3);
  CHECK(table.column_names.size() == 3);
  CHECK(table.rows[1][0] == "3");
  CHECK(table.label_column() == 2);
}

TEST_CASE("parse_table rejects bad input") {
  SUBCASE("arity mismatch names the offending line") {
    try {
      parse_table("a,b,class\n1,2,x\n3,4\n", two_numeric_schema(), "t");
      FAIL("expected an error");
    } catch (const std::exception& e) {
      CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }
  }
  SUBCASE("empty file") {
    CHECK_THROWS_WITH_AS(parse_table("", two_numeric_schema(), "t"),
                         doctest::Contains("no data rows"), std::runtime_error);
  }
  SUBCASE("header only") {
    CHECK_THROWS_WITH_AS(parse_table("a,b,class\n", two_numeric_schema(), "t"),
                         doctest::Contains("no data rows"), std::runtime_error);
  }
  SUBCASE("unknown column") {
    CHECK_THROWS_WITH_AS(parse_table("a,zzz,class\n1,2,x\n", two_numeric_schema(), "t"),
                         doctest::Contains("unknown column"), std::runtime_error);
  }
  SUBCASE("no label column in schema") {
    ColumnSchema schema{{"a", ColumnKind::numeric}, {"b", ColumnKind::numeric}};
    CHECK_THROWS(parse_table("a,b\n1,2\n", schema, "t"));
  }
}

TEST_CASE("preprocess one-hot encodes categoricals") {
  ColumnSchema schema{{"color", ColumnKind::categorical},
                      {"v", ColumnKind::numeric},
                      {"class", ColumnKind::label}};
  const auto table = parse_table(
      "color,v,class\nb,1,x\na,2,y\nc,3,x\na,4,y\nb,5,x\n", schema, "t");
  const Dataset ds = preprocess(table);

  CHECK(ds.n() == 5);
  CHECK(ds.dim() == 4);  // 3 indicators + 1 numeric
  CHECK(ds.classes() == 2);
  // each row has exactly one '1' in the indicator group (columns 0..2)
  for (Index i = 0; i < ds.n(); ++i)
    CHECK(ds.x().row(i).head(3).sum() == doctest::Approx(1.0));
  // categories are ordered a, b, c
  CHECK(ds.x()(1, 0) == 1.0);
  CHECK(ds.x()(0, 1) == 1.0);
  CHECK(ds.x()(2, 2) == 1.0);
  CHECK(ds.feature_names()[0] == "color=a");
}

TEST_CASE("preprocess reproduces the adult-style encoded width") {
  // 6 numeric columns plus categoricals of cardinality 9, 16, 7, 15, 6, 5,
  // 2 and 42: encoded width 6 + 102 = 108.
  const std::vector<int> cardinalities{9, 16, 7, 15, 6, 5, 2, 42};
  ColumnSchema schema{{"class", ColumnKind::label}};
  std::string header;
  for (int j = 0; j < 6; ++j) {
    header += "n" + std::to_string(j) + ",";
    schema["n" + std::to_string(j)] = ColumnKind::numeric;
  }
  for (std::size_t j = 0; j < cardinalities.size(); ++j) {
    header += "c" + std::to_string(j) + ",";
    schema["c" + std::to_string(j)] = ColumnKind::categorical;
  }
  header += "class\n";

  std::string body;
  for (int row = 0; row < 50; ++row) {
    for (int j = 0; j < 6; ++j) body += std::to_string(row + j) + ",";
    for (std::size_t j = 0; j < cardinalities.size(); ++j)
      body += "v" + std::to_string(row % cardinalities[j]) + ",";
    body += (row % 2 ? "gt50k" : "le50k");
    body += "\n";
  }

  const Dataset ds = preprocess(parse_table(header + body, schema, "adultish"));
  CHECK(ds.dim() == 108);
  CHECK(ds.classes() == 2);
}

TEST_CASE("preprocess drops rows with missing cells") {
  std::string csv = "a,b,class\n";
  for (int i = 0; i < 10; ++i)
    csv += std::to_string(i) + "," + (i == 4 ? "NaN" : std::to_string(2 * i)) +
           (i % 2 ? ",x\n" : ",y\n");
  const Dataset ds = preprocess(parse_table(csv, two_numeric_schema(), "t"));
  CHECK(ds.n() == 9);  // one of ten rows dropped
}

TEST_CASE("preprocess error cases") {
  SUBCASE("all rows dropped") {
    CHECK_THROWS_WITH_AS(
        preprocess(parse_table("a,b,class\n?,1,x\n2,NA,y\n", two_numeric_schema(), "t")),
        doctest::Contains("missing"), std::runtime_error);
  }
  SUBCASE("single-class label") {
    CHECK_THROWS_WITH_AS(
        preprocess(parse_table("a,b,class\n1,1,x\n2,2,x\n", two_numeric_schema(), "t")),
        doctest::Contains("classes"), std::runtime_error);
  }
  SUBCASE("non-numeric cell in numeric column") {
    CHECK_THROWS(preprocess(
        parse_table("a,b,class\n1,oops,x\n2,2,y\n", two_numeric_schema(), "t")));
  }
}

TEST_CASE("preprocess is idempotent on numeric tables") {
  const auto table = parse_table("a,b,class\n1.5,2,x\n3,4.25,y\n5,6,x\n",
                                 two_numeric_schema(), "t");
  const Dataset once = preprocess(table);

  // rebuild a raw table from the dataset and encode again
  RawTable again;
  again.name = "t2";
  again.column_names = {"a", "b", "class"};
  again.column_kinds = {ColumnKind::numeric, ColumnKind::numeric, ColumnKind::label};
  for (Index i = 0; i < once.n(); ++i)
    again.rows.push_back({std::to_string(once.x()(i, 0)), std::to_string(once.x()(i, 1)),
                          once.class_names()[once.label_of(i)]});
  const Dataset twice = preprocess(again);

  CHECK(twice.n() == once.n());
  CHECK(twice.dim() == once.dim());
  CHECK((twice.x() - once.x()).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  CHECK((twice.y() - once.y()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("binary label view maps classes to -1/+1") {
  const auto table = parse_table("a,b,class\n1,2,x\n3,4,y\n", two_numeric_schema(), "t");
  const Dataset ds = preprocess(table);
  const Vector view = ds.binary_labels();
  CHECK(view[0] == -1.0);  // class "x" is index 0
  CHECK(view[1] == 1.0);
}

TEST_CASE("stratified_kfold balances classes") {
  const int n = 100, k = 5;
  std::string csv = "a,b,class\n";
  for (int i = 0; i < n; ++i)
    csv += std::to_string(i) + ",0," + (i % 2 ? "pos" : "neg") + "\n";
  const Dataset ds = preprocess(parse_table(csv, two_numeric_schema(), "t"));

  const FoldSpec spec = stratified_kfold(ds, k, 17);
  for (int fold = 0; fold < k; ++fold) {
    const auto test = spec.test_indices(fold);
    CHECK(test.size() == 20);
    int pos = 0;
    for (Index i : test) pos += ds.label_of(i) == 1 ? 1 : 0;
    CHECK(pos == 10);
  }
}

TEST_CASE("stratified_kfold is deterministic and partitions the data") {
  const Dataset ds = preprocess(synth_table(synth_preset("tiny", 7)));
  const FoldSpec a = stratified_kfold(ds, 4, 99);
  const FoldSpec b = stratified_kfold(ds, 4, 99);
  CHECK(a.assignments == b.assignments);
  const FoldSpec c = stratified_kfold(ds, 4, 100);
  CHECK(a.assignments != c.assignments);

  // folds partition [0, N)
  std::set<Index> seen;
  for (int fold = 0; fold < 4; ++fold) {
    const auto test = a.test_indices(fold);
    CHECK(!test.empty());
    for (Index i : test) CHECK(seen.insert(i).second);
  }
  CHECK(seen.size() == static_cast<std::size_t>(ds.n()));

  // per-class counts across folds differ by at most one
  for (Index c2 = 0; c2 < ds.classes(); ++c2) {
    std::vector<int> counts(4, 0);
    for (Index i = 0; i < ds.n(); ++i)
      if (ds.label_of(i) == c2) ++counts[a.assignments[i]];
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    CHECK(*hi - *lo <= 1);
  }

  // train/test are complements
  const auto train = a.train_indices(1);
  const auto test = a.test_indices(1);
  CHECK(train.size() + test.size() == static_cast<std::size_t>(ds.n()));
}

TEST_CASE("stratified_kfold rejects classes smaller than k") {
  std::string csv = "a,b,class\n1,1,x\n2,2,x\n3,3,x\n4,4,x\n5,5,x\n6,6,y\n7,7,y\n8,8,y\n";
  const Dataset ds = preprocess(parse_table(csv, two_numeric_schema(), "t"));
  CHECK_THROWS_WITH_AS(stratified_kfold(ds, 5, 1), doctest::Contains("fewer than k"),
                       std::runtime_error);
  CHECK_THROWS(stratified_kfold(ds, 1, 1));
}

TEST_CASE("manifest loading finds datasets by name") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "forestlab_dataio_test";
  fs::create_directories(dir);
  const std::string manifest = write_datasets(dir.string(), {"tiny"}, 11);

  const Dataset ds = load_dataset(manifest, "tiny");
  CHECK(ds.name() == "tiny");
  CHECK(ds.n() > 300);
  CHECK(ds.dim() == 6);  // 3 numeric + 3 site indicators
  CHECK_THROWS_WITH_AS(load_dataset(manifest, "nope"), doctest::Contains("not found"),
                       std::runtime_error);
  fs::remove_all(dir);
}

TEST_CASE("load_table reads from disk and errors on missing files") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "forestlab_dataio_test2";
  fs::create_directories(dir);
  const auto path = dir / "small.csv";
  std::ofstream(path) << "a,b,class\n1,2,x\n3,4,y\n";

  const RawTable table = load_table(path.string(), two_numeric_schema());
  CHECK(table.rows.size() == 2);
  CHECK(table.name == "small");
  CHECK_THROWS(load_table((dir / "missing.csv").string(), two_numeric_schema()));
  fs::remove_all(dir);
}
