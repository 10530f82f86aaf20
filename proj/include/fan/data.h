// Copyright 2026 The FAN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAN_DATA_H_
#define FAN_DATA_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fan/csv.h"
#include "fan/matrix.h"

namespace fan {

enum class ColumnKind { kNumeric, kCategorical };

// Level substituted for missing categorical cells.
inline constexpr std::string_view kMissingLevel = "__missing__";

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  std::vector<std::string> levels;  // categorical, first-appearance order
  double mean = 0.0;                // numeric z-scoring parameters
  double stddev = 1.0;              // population standard deviation
  bool is_protected = false;
  // Constant columns carry no information and are not encoded; decoding
  // restores their single value.
  bool dropped = false;

  std::size_t EncodedWidth() const;
};

struct Schema {
  std::vector<ColumnSpec> columns;  // original file order

  std::size_t EncodedWidth() const;
  std::size_t ProtectedIndex() const;
  const ColumnSpec& Protected() const { return columns[ProtectedIndex()]; }
  // Names of the encoded features, e.g. "age" or "thal=normal".
  std::vector<std::string> EncodedNames() const;
  // Exactly one protected column, unique non-empty levels, positive stddev.
  void Validate() const;
};

enum class ProtectedMode { kClassification, kRegression };

// The protected characteristic r-bar. Classification stores class indices;
// regression stores the raw values.
struct ProtectedTarget {
  ProtectedMode mode = ProtectedMode::kClassification;
  std::vector<int> labels;
  std::vector<double> values;
  std::vector<std::string> class_names;
  std::vector<std::string> raw;  // original cells, for reattaching on export

  std::size_t size() const {
    return mode == ProtectedMode::kClassification ? labels.size()
                                                  : values.size();
  }
  std::size_t num_classes() const { return class_names.size(); }
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

struct Dataset {
  Matrix x;  // [n x d], protected column excluded
  ProtectedTarget protected_attr;
  Schema schema;
  Split split;

  std::size_t rows() const { return x.rows(); }
};

struct LoadOptions {
  CsvOptions csv;
  std::map<std::string, ColumnKind> overrides;
  ProtectedMode mode = ProtectedMode::kClassification;
  // Numeric protected columns with more distinct values than this are
  // quantile-binned into `bins` classes in classification mode.
  std::size_t max_protected_levels = 10;
  std::size_t bins = 4;
};

struct LoadReport {
  std::size_t dropped_rows = 0;
  std::vector<std::string> warnings;
};

bool IsMissing(std::string_view cell);

Schema InferSchema(const Table& table, const std::string& protected_column,
                   const LoadOptions& options, LoadReport* report = nullptr);

// Builds x and r-bar from a parsed table. No split is assigned.
Dataset BuildDataset(const Table& table, const std::string& protected_column,
                     const LoadOptions& options, LoadReport* report = nullptr);

Dataset LoadCsv(const std::string& path, const std::string& protected_column,
                const LoadOptions& options = {}, LoadReport* report = nullptr);

// z-scores numerics and one-hot encodes categoricals in schema order. The
// table must contain every non-protected schema column by name.
Matrix Encode(const Table& table, const Schema& schema);

// Inverse of Encode: un-z-scores numerics and takes the argmax of each
// one-hot block (ties go to the lowest level). Columns keep their original
// order; the protected column is emitted only when `protected_cells` is given.
Table Decode(const Matrix& y, const Schema& schema,
             const std::vector<std::string>* protected_cells = nullptr);

// Deterministic train/validation split, stratified by protected class when
// class counts permit.
Dataset SplitDataset(Dataset dataset, double validation_fraction,
                     std::uint64_t seed, LoadReport* report = nullptr);

// Quantile-bins continuous values into at most `bins` classes.
std::vector<int> QuantileBins(const std::vector<double>& values,
                              std::size_t bins,
                              std::vector<std::string>* names = nullptr);

}  // namespace fan

#endif  // FAN_DATA_H_
