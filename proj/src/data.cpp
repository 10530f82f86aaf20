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

#include "fan/data.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "fan/error.h"
#include "fan/rng.h"

namespace fan {

std::size_t ColumnSpec::EncodedWidth() const {
  if (is_protected || dropped) return 0;
  return kind == ColumnKind::kNumeric ? 1 : levels.size();
}

std::size_t Schema::EncodedWidth() const {
  std::size_t width = 0;
  for (const auto& c : columns) width += c.EncodedWidth();
  return width;
}

std::size_t Schema::ProtectedIndex() const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].is_protected) return i;
  }
  throw ConfigError("schema has no protected column");
}

std::vector<std::string> Schema::EncodedNames() const {
  std::vector<std::string> names;
  for (const auto& c : columns) {
    if (c.EncodedWidth() == 0) continue;
    if (c.kind == ColumnKind::kNumeric) {
      names.push_back(c.name);
    } else {
      for (const auto& level : c.levels) names.push_back(c.name + "=" + level);
    }
  }
  return names;
}

void Schema::Validate() const {
  std::size_t protected_count = 0;
  for (const auto& c : columns) {
    if (c.is_protected) ++protected_count;
    if (c.is_protected || c.dropped) continue;
    if (c.kind == ColumnKind::kCategorical) {
      std::set<std::string> seen;
      for (const auto& level : c.levels) {
        if (level.empty()) {
          throw DataError("column '" + c.name + "' has an empty level");
        }
        if (!seen.insert(level).second) {
          throw DataError("column '" + c.name + "' repeats level '" + level +
                          "'");
        }
      }
      if (c.levels.empty()) {
        throw DataError("column '" + c.name + "' has no levels");
      }
    } else if (!(c.stddev > 0.0) || !std::isfinite(c.mean)) {
      throw DataError("column '" + c.name + "' has no spread");
    }
  }
  if (protected_count != 1) {
    throw ConfigError("schema must flag exactly one protected column, found " +
                      std::to_string(protected_count));
  }
}

bool IsMissing(std::string_view cell) {
  while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
  while (!cell.empty() && cell.back() == ' ') cell.remove_suffix(1);
  return cell.empty() || cell == "?" || cell == "NA" || cell == "N/A" ||
         cell == "NaN" || cell == "nan";
}

namespace {

void Warn(LoadReport* report, std::string message) {
  if (report != nullptr) report->warnings.push_back(std::move(message));
}

ColumnSpec InferColumn(const Table& table, std::size_t col,
                       const LoadOptions& options, LoadReport* report) {
  ColumnSpec spec;
  spec.name = table.header[col];
  bool all_numeric = true;
  bool any_value = false;
  std::vector<double> values;
  for (const auto& row : table.rows) {
    const std::string& cell = row[col];
    if (IsMissing(cell)) continue;
    any_value = true;
    double v;
    if (ParseDouble(cell, v)) {
      values.push_back(v);
    } else {
      all_numeric = false;
    }
  }
  spec.kind = all_numeric && any_value ? ColumnKind::kNumeric
                                       : ColumnKind::kCategorical;
  if (auto it = options.overrides.find(spec.name);
      it != options.overrides.end()) {
    if (it->second == ColumnKind::kNumeric && !all_numeric) {
      throw DataError("column '" + spec.name +
                      "' is forced numeric but has non-numeric cells");
    }
    spec.kind = it->second;
  }

  if (spec.kind == ColumnKind::kNumeric) {
    if (values.empty()) {
      spec.dropped = true;
      Warn(report, "column '" + spec.name + "' has no values; dropped");
      return spec;
    }
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    spec.mean = mean;
    spec.stddev = std::sqrt(var / n);
    if (!(spec.stddev > 0.0)) {
      spec.dropped = true;
      spec.stddev = 1.0;
      Warn(report, "column '" + spec.name + "' is constant; dropped");
    }
    return spec;
  }

  std::set<std::string> seen;
  for (const auto& row : table.rows) {
    const std::string level =
        IsMissing(row[col]) ? std::string(kMissingLevel) : row[col];
    if (seen.insert(level).second) spec.levels.push_back(level);
  }
  if (spec.levels.size() < 2) {
    spec.dropped = true;
    Warn(report, "column '" + spec.name + "' has a single level; dropped");
  }
  return spec;
}

ProtectedTarget BuildProtected(const Table& table, std::size_t col,
                               const LoadOptions& options,
                               LoadReport* report) {
  ProtectedTarget target;
  target.mode = options.mode;
  for (const auto& row : table.rows) target.raw.push_back(row[col]);

  std::vector<double> numeric;
  bool all_numeric = true;
  for (const auto& cell : target.raw) {
    double v;
    if (ParseDouble(cell, v)) {
      numeric.push_back(v);
    } else {
      all_numeric = false;
    }
  }
  const std::string& name = table.header[col];

  if (options.mode == ProtectedMode::kRegression) {
    if (!all_numeric) {
      throw ConfigError("protected column '" + name +
                        "' must be numeric for a regression adversary");
    }
    target.values = std::move(numeric);
    return target;
  }

  if (all_numeric) {
    std::vector<double> distinct = numeric;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    if (distinct.size() > options.max_protected_levels) {
      target.labels = QuantileBins(numeric, options.bins, &target.class_names);
      Warn(report, "protected column '" + name + "' is continuous; binned into " +
                       std::to_string(target.class_names.size()) +
                       " quantile classes");
      return target;
    }
    for (double v : distinct) target.class_names.push_back(FormatDouble(v));
    for (double v : numeric) {
      target.labels.push_back(static_cast<int>(
          std::lower_bound(distinct.begin(), distinct.end(), v) -
          distinct.begin()));
    }
    return target;
  }

  for (const auto& cell : target.raw) {
    auto it = std::find(target.class_names.begin(), target.class_names.end(),
                        cell);
    if (it == target.class_names.end()) {
      target.class_names.push_back(cell);
      it = target.class_names.end() - 1;
    }
    target.labels.push_back(static_cast<int>(it - target.class_names.begin()));
  }
  return target;
}

}  // namespace

std::vector<int> QuantileBins(const std::vector<double>& values,
                              std::size_t bins,
                              std::vector<std::string>* names) {
  if (bins < 2) throw ConfigError("need at least 2 bins");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  // Upper edges at the k/bins quantiles; ties can merge bins.
  std::vector<double> edges;
  for (std::size_t k = 1; k < bins; ++k) {
    const double edge = sorted[std::min(n - 1, k * n / bins)];
    if (edges.empty() || edge > edges.back()) edges.push_back(edge);
  }
  // A value equal to an edge falls in the bin above it.
  std::vector<int> raw(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    raw[i] = static_cast<int>(
        std::upper_bound(edges.begin(), edges.end(), values[i]) - edges.begin());
  }
  // Renumber to remove empty bins.
  std::vector<int> used(edges.size() + 1, -1);
  int next = 0;
  for (std::size_t b = 0; b < used.size(); ++b) {
    if (std::find(raw.begin(), raw.end(), static_cast<int>(b)) != raw.end()) {
      used[b] = next++;
    }
  }
  for (int& r : raw) r = used[r];
  if (names != nullptr) {
    names->clear();
    for (std::size_t b = 0; b < used.size(); ++b) {
      if (used[b] < 0) continue;
      const std::string lo = b == 0 ? "-inf" : FormatDouble(edges[b - 1]);
      const std::string hi = b == edges.size() ? "inf" : FormatDouble(edges[b]);
      names->push_back("[" + lo + "," + hi + ")");
    }
  }
  return raw;
}

Schema InferSchema(const Table& table, const std::string& protected_column,
                   const LoadOptions& options, LoadReport* report) {
  if (!table.HasColumn(protected_column)) {
    throw ConfigError("protected column '" + protected_column +
                      "' not found in header");
  }
  for (const auto& [name, kind] : options.overrides) {
    if (!table.HasColumn(name)) {
      throw ConfigError("override names unknown column '" + name + "'");
    }
  }
  Schema schema;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c] == protected_column) {
      ColumnSpec spec;
      spec.name = protected_column;
      spec.is_protected = true;
      spec.kind = ColumnKind::kCategorical;
      schema.columns.push_back(std::move(spec));
      continue;
    }
    schema.columns.push_back(InferColumn(table, c, options, report));
  }
  return schema;
}

Dataset BuildDataset(const Table& raw, const std::string& protected_column,
                     const LoadOptions& options, LoadReport* report) {
  if (!raw.HasColumn(protected_column)) {
    throw ConfigError("protected column '" + protected_column +
                      "' not found in header");
  }
  const std::size_t pcol = raw.ColumnIndex(protected_column);
  Table table;
  table.header = raw.header;
  std::size_t dropped = 0;
  for (const auto& row : raw.rows) {
    if (IsMissing(row[pcol])) {
      ++dropped;
    } else {
      table.rows.push_back(row);
    }
  }
  if (report != nullptr) report->dropped_rows = dropped;
  if (dropped > 0) {
    Warn(report, std::to_string(dropped) +
                     " rows with a missing protected value dropped");
  }
  if (table.rows.empty()) throw DataError("no usable rows");
  if (table.rows.size() < 2) throw DataError("need at least 2 rows");

  Dataset ds;
  ds.schema = InferSchema(table, protected_column, options, report);
  ds.schema.Validate();
  if (ds.schema.EncodedWidth() == 0) {
    throw DataError("no informative feature columns besides the protected one");
  }
  ds.protected_attr = BuildProtected(table, pcol, options, report);
  ds.x = Encode(table, ds.schema);
  return ds;
}

Dataset LoadCsv(const std::string& path, const std::string& protected_column,
                const LoadOptions& options, LoadReport* report) {
  Table table;
  try {
    table = ReadCsv(path, options.csv);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) {
      throw DataError("cannot read input '" + path + "'");
    }
    throw;
  }
  return BuildDataset(table, protected_column, options, report);
}

Matrix Encode(const Table& table, const Schema& schema) {
  std::vector<std::size_t> source(schema.columns.size());
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    if (schema.columns[c].EncodedWidth() == 0) continue;
    if (!table.HasColumn(schema.columns[c].name)) {
      throw DataError("table lacks column '" + schema.columns[c].name + "'");
    }
    source[c] = table.ColumnIndex(schema.columns[c].name);
  }
  Matrix x(table.rows.size(), schema.EncodedWidth());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    std::size_t offset = 0;
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      const ColumnSpec& spec = schema.columns[c];
      const std::size_t width = spec.EncodedWidth();
      if (width == 0) continue;
      const std::string& cell = row[source[c]];
      if (spec.kind == ColumnKind::kNumeric) {
        double v = spec.mean;
        if (!IsMissing(cell) && !ParseDouble(cell, v)) {
          throw DataError("column '" + spec.name + "' row " +
                          std::to_string(r) + ": '" + cell +
                          "' is not a number");
        }
        x(r, offset) = (v - spec.mean) / spec.stddev;
      } else {
        const std::string level =
            IsMissing(cell) ? std::string(kMissingLevel) : cell;
        auto it = std::find(spec.levels.begin(), spec.levels.end(), level);
        if (it == spec.levels.end()) {
          throw DataError("column '" + spec.name + "': unseen level '" +
                          level + "'");
        }
        x(r, offset + static_cast<std::size_t>(it - spec.levels.begin())) = 1.0;
      }
      offset += width;
    }
  }
  return x;
}

Table Decode(const Matrix& y, const Schema& schema,
             const std::vector<std::string>* protected_cells) {
  if (y.cols() != schema.EncodedWidth()) {
    throw ShapeError("decode: matrix has " + std::to_string(y.cols()) +
                     " columns, schema encodes " +
                     std::to_string(schema.EncodedWidth()));
  }
  if (protected_cells != nullptr && protected_cells->size() != y.rows()) {
    throw ShapeError("decode: protected column length differs from rows");
  }
  Table table;
  for (const auto& spec : schema.columns) {
    if (spec.is_protected && protected_cells == nullptr) continue;
    table.header.push_back(spec.name);
  }
  table.rows.reserve(y.rows());
  for (std::size_t r = 0; r < y.rows(); ++r) {
    std::vector<std::string> row;
    std::size_t offset = 0;
    for (const auto& spec : schema.columns) {
      if (spec.is_protected) {
        if (protected_cells != nullptr) row.push_back((*protected_cells)[r]);
        continue;
      }
      if (spec.dropped) {
        row.push_back(spec.kind == ColumnKind::kNumeric
                          ? FormatDouble(spec.mean)
                          : (spec.levels.empty() ? std::string()
                                                 : spec.levels.front()));
        continue;
      }
      if (spec.kind == ColumnKind::kNumeric) {
        row.push_back(FormatDouble(y(r, offset) * spec.stddev + spec.mean));
        offset += 1;
      } else {
        std::size_t best = 0;
        for (std::size_t k = 1; k < spec.levels.size(); ++k) {
          if (y(r, offset + k) > y(r, offset + best)) best = k;
        }
        row.push_back(spec.levels[best]);
        offset += spec.levels.size();
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

Dataset SplitDataset(Dataset dataset, double validation_fraction,
                     std::uint64_t seed, LoadReport* report) {
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw ConfigError("validation fraction must lie in (0, 1)");
  }
  const std::size_t n = dataset.rows();
  if (n < 2) throw DataError("need at least 2 rows to split");
  const auto target = static_cast<std::size_t>(std::clamp<double>(
      std::round(static_cast<double>(n) * validation_fraction), 1.0,
      static_cast<double>(n - 1)));
  Rng rng(DeriveSeed(seed, SeedStream::kSplit));
  std::vector<bool> is_validation(n, false);

  auto unstratified = [&] {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.Shuffle(order);
    for (std::size_t i = 0; i < target; ++i) is_validation[order[i]] = true;
  };

  const ProtectedTarget& pt = dataset.protected_attr;
  if (pt.mode == ProtectedMode::kRegression || pt.num_classes() == 0) {
    unstratified();
  } else {
    const std::size_t classes = pt.num_classes();
    std::vector<std::vector<std::size_t>> members(classes);
    for (std::size_t i = 0; i < n; ++i) members[pt.labels[i]].push_back(i);
    // Largest-remainder allocation, keeping at least one row of each class
    // in the training split.
    std::vector<std::size_t> take(classes);
    std::vector<double> remainder(classes);
    std::size_t allocated = 0;
    for (std::size_t c = 0; c < classes; ++c) {
      const double exact = static_cast<double>(members[c].size()) *
                           static_cast<double>(target) / static_cast<double>(n);
      const std::size_t cap = members[c].empty() ? 0 : members[c].size() - 1;
      take[c] = std::min(static_cast<std::size_t>(std::floor(exact)), cap);
      remainder[c] = exact - std::floor(exact);
      allocated += take[c];
    }
    std::vector<std::size_t> order(classes);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                     std::size_t b) {
      return remainder[a] > remainder[b];
    });
    for (bool progress = true; allocated < target && progress;) {
      progress = false;
      for (std::size_t c : order) {
        if (allocated == target) break;
        if (take[c] + 1 < members[c].size()) {
          ++take[c];
          ++allocated;
          progress = true;
        }
      }
    }
    if (allocated == 0) {
      Warn(report, "class counts do not permit stratification; split is "
                   "unstratified");
      unstratified();
    } else {
      for (std::size_t c = 0; c < classes; ++c) {
        rng.Shuffle(members[c]);
        for (std::size_t i = 0; i < take[c]; ++i) {
          is_validation[members[c][i]] = true;
        }
      }
    }
  }

  dataset.split = {};
  for (std::size_t i = 0; i < n; ++i) {
    (is_validation[i] ? dataset.split.validation : dataset.split.train)
        .push_back(i);
  }
  if (pt.mode == ProtectedMode::kClassification) {
    std::vector<bool> in_train(pt.num_classes(), false);
    for (std::size_t i : dataset.split.train) in_train[pt.labels[i]] = true;
    for (std::size_t c = 0; c < in_train.size(); ++c) {
      if (!in_train[c]) {
        Warn(report, "protected class '" + pt.class_names[c] +
                         "' is absent from the training split");
      }
    }
  }
  return dataset;
}

}  // namespace fan
