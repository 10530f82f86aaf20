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

#include "fan/matrix.h"

#include <cmath>

#include "fan/error.h"

namespace fan {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

bool Matrix::AllFinite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Matrix Matrix::SelectRows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= rows_) throw ShapeError("row index out of range");
    auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Matrix Matrix::SelectCols(std::size_t begin, std::size_t end) const {
  if (begin > end || end > cols_) throw ShapeError("column range out of range");
  Matrix out(rows_, end - begin);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = begin; c < end; ++c) out(r, c - begin) = (*this)(r, c);
  }
  return out;
}

}  // namespace fan
