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

// Central finite-difference oracle for network gradients. Uses only the
// forward pass, so it stays independent of the backpropagation code.

#ifndef FAN_TESTS_GRADIENT_ORACLE_H_
#define FAN_TESTS_GRADIENT_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <functional>

#include "fan/matrix.h"
#include "fan/nn.h"

namespace fan::testing {

using ScalarLoss = std::function<double(const Matrix& output)>;

inline double RelativeError(double analytic, double numeric,
                            double floor = 1e-7) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / scale;
}

// Numerical gradient of loss(Forward(params, input)) w.r.t. every parameter.
inline GradientSet NumericGradient(NetworkParams params, const Matrix& input,
                                   const ScalarLoss& loss, double h = 1e-5) {
  GradientSet g = GradientSet::ZerosLike(params);
  auto probe = [&](double& slot) {
    const double saved = slot;
    slot = saved + h;
    const double up = loss(Forward(params, input));
    slot = saved - h;
    const double down = loss(Forward(params, input));
    slot = saved;
    return (up - down) / (2 * h);
  };
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    auto w = params.layers[i].weight.values();
    auto gw = g.weight[i].values();
    for (std::size_t j = 0; j < w.size(); ++j) gw[j] = probe(w[j]);
    auto& b = params.layers[i].bias;
    for (std::size_t j = 0; j < b.size(); ++j) g.bias[i][j] = probe(b[j]);
  }
  return g;
}

// Numerical gradient of f(input) w.r.t. the input entries.
inline Matrix NumericInputGradient(Matrix input,
                                   const std::function<double(const Matrix&)>& f,
                                   double h = 1e-5) {
  Matrix g(input.rows(), input.cols());
  auto v = input.values();
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double saved = v[j];
    v[j] = saved + h;
    const double up = f(input);
    v[j] = saved - h;
    const double down = f(input);
    v[j] = saved;
    g.values()[j] = (up - down) / (2 * h);
  }
  return g;
}

inline double MaxRelativeError(const GradientSet& analytic,
                               const GradientSet& numeric) {
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.weight.size(); ++i) {
    auto a = analytic.weight[i].values();
    auto n = numeric.weight[i].values();
    for (std::size_t j = 0; j < a.size(); ++j) {
      worst = std::max(worst, RelativeError(a[j], n[j]));
    }
    for (std::size_t j = 0; j < analytic.bias[i].size(); ++j) {
      worst = std::max(worst,
                       RelativeError(analytic.bias[i][j], numeric.bias[i][j]));
    }
  }
  return worst;
}

inline double MaxRelativeError(const Matrix& analytic, const Matrix& numeric) {
  double worst = 0.0;
  for (std::size_t j = 0; j < analytic.size(); ++j) {
    worst = std::max(worst,
                     RelativeError(analytic.values()[j], numeric.values()[j]));
  }
  return worst;
}

}  // namespace fan::testing

#endif  // FAN_TESTS_GRADIENT_ORACLE_H_
