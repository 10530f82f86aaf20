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

// Per-element kernel bodies shared by the serial and OpenMP kernels. Keeping
// the arithmetic in one place is what makes the two paths bit-identical.

#ifndef FAN_SRC_KERNEL_OPS_H_
#define FAN_SRC_KERNEL_OPS_H_

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "fan/error.h"
#include "fan/kernels.h"
#include "fan/matrix.h"

namespace fan::kernels::detail {

inline void CheckAffine(const Matrix& a, const Matrix& w,
                        std::span<const double> b, const Matrix& z) {
  if (a.cols() != w.cols() || b.size() != w.rows() || z.rows() != a.rows() ||
      z.cols() != w.rows()) {
    throw ShapeError("affine: input has " + std::to_string(a.cols()) +
                     " columns, layer expects " + std::to_string(w.cols()));
  }
}

inline void CheckWeightGrad(const Matrix& delta, const Matrix& a,
                            const Matrix& gw) {
  if (delta.rows() != a.rows() || gw.rows() != delta.cols() ||
      gw.cols() != a.cols()) {
    throw ShapeError("weight gradient shape mismatch");
  }
}

inline void CheckInputGrad(const Matrix& delta, const Matrix& w,
                           const Matrix& da) {
  if (delta.cols() != w.rows() || da.rows() != delta.rows() ||
      da.cols() != w.cols()) {
    throw ShapeError("input gradient shape mismatch");
  }
}

// z[r, :] = a[r, :] * w^T + b
inline void AffineRow(const Matrix& a, const Matrix& w,
                      std::span<const double> b, Matrix& z, std::size_t r) {
  const double* ar = a.data() + r * a.cols();
  double* zr = z.data() + r * z.cols();
  for (std::size_t o = 0; o < w.rows(); ++o) {
    const double* wo = w.data() + o * w.cols();
    double acc = b[o];
    for (std::size_t i = 0; i < w.cols(); ++i) acc += ar[i] * wo[i];
    zr[o] = acc;
  }
}

// gw[o, :] = sum_r delta[r, o] * a[r, :]
inline void WeightGradRow(const Matrix& delta, const Matrix& a, Matrix& gw,
                          std::size_t o) {
  double* go = gw.data() + o * gw.cols();
  std::fill(go, go + gw.cols(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double d = delta(r, o);
    if (d == 0.0) continue;
    const double* ar = a.data() + r * a.cols();
    for (std::size_t i = 0; i < a.cols(); ++i) go[i] += d * ar[i];
  }
}

inline double BiasGradEntry(const Matrix& delta, std::size_t o) {
  double acc = 0.0;
  for (std::size_t r = 0; r < delta.rows(); ++r) acc += delta(r, o);
  return acc;
}

// da[r, :] = delta[r, :] * w
inline void InputGradRow(const Matrix& delta, const Matrix& w, Matrix& da,
                         std::size_t r) {
  double* dr = da.data() + r * da.cols();
  std::fill(dr, dr + da.cols(), 0.0);
  const double* delr = delta.data() + r * delta.cols();
  for (std::size_t o = 0; o < w.rows(); ++o) {
    const double d = delr[o];
    if (d == 0.0) continue;
    const double* wo = w.data() + o * w.cols();
    for (std::size_t i = 0; i < w.cols(); ++i) dr[i] += d * wo[i];
  }
}

inline double Sigmoid(double v) {
  if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}

inline void ActivateRow(Activation act, std::span<double> z) {
  switch (act) {
    case Activation::kIdentity:
      return;
    case Activation::kRelu:
      for (double& v : z) v = v > 0.0 ? v : 0.0;
      return;
    case Activation::kTanh:
      for (double& v : z) v = std::tanh(v);
      return;
    case Activation::kSigmoid:
      for (double& v : z) v = Sigmoid(v);
      return;
    case Activation::kSoftmax: {
      const double mx = *std::max_element(z.begin(), z.end());
      double sum = 0.0;
      for (double& v : z) {
        v = std::exp(v - mx);
        sum += v;
      }
      for (double& v : z) v /= sum;
      return;
    }
  }
}

inline void ActivationBackwardRow(Activation act, std::span<const double> out,
                                  std::span<double> grad) {
  switch (act) {
    case Activation::kIdentity:
      return;
    case Activation::kRelu:
      for (std::size_t i = 0; i < grad.size(); ++i) {
        if (out[i] <= 0.0) grad[i] = 0.0;
      }
      return;
    case Activation::kTanh:
      for (std::size_t i = 0; i < grad.size(); ++i) {
        grad[i] *= 1.0 - out[i] * out[i];
      }
      return;
    case Activation::kSigmoid:
      for (std::size_t i = 0; i < grad.size(); ++i) {
        grad[i] *= out[i] * (1.0 - out[i]);
      }
      return;
    case Activation::kSoftmax: {
      // Jacobian-vector product: s * (g - <g, s>)
      double dot = 0.0;
      for (std::size_t i = 0; i < grad.size(); ++i) dot += grad[i] * out[i];
      for (std::size_t i = 0; i < grad.size(); ++i) {
        grad[i] = out[i] * (grad[i] - dot);
      }
      return;
    }
  }
}

}  // namespace fan::kernels::detail

#endif  // FAN_SRC_KERNEL_OPS_H_
