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

#include <cstdint>

#include "fan/error.h"
#include "fan/kernels.h"
#include "kernel_ops.h"

namespace fan::kernels::parallel {

namespace {

bool Worth(std::size_t rows, std::size_t inner) {
  return rows * inner >= kParallelThreshold;
}

}  // namespace

void Affine(const Matrix& a, const Matrix& w, std::span<const double> b,
            Matrix& z) {
  detail::CheckAffine(a, w, b, z);
  const auto n = static_cast<std::int64_t>(a.rows());
#pragma omp parallel for schedule(static) if (Worth(a.rows(), w.size()))
  for (std::int64_t r = 0; r < n; ++r) {
    detail::AffineRow(a, w, b, z, static_cast<std::size_t>(r));
  }
}

void WeightGrad(const Matrix& delta, const Matrix& a, Matrix& gw) {
  detail::CheckWeightGrad(delta, a, gw);
  const auto outs = static_cast<std::int64_t>(gw.rows());
#pragma omp parallel for schedule(static) if (Worth(a.rows(), gw.size()))
  for (std::int64_t o = 0; o < outs; ++o) {
    detail::WeightGradRow(delta, a, gw, static_cast<std::size_t>(o));
  }
}

void BiasGrad(const Matrix& delta, std::span<double> gb) {
  if (gb.size() != delta.cols()) throw ShapeError("bias gradient shape");
  const auto outs = static_cast<std::int64_t>(gb.size());
#pragma omp parallel for schedule(static) if (Worth(delta.rows(), delta.cols()))
  for (std::int64_t o = 0; o < outs; ++o) {
    gb[o] = detail::BiasGradEntry(delta, static_cast<std::size_t>(o));
  }
}

void InputGrad(const Matrix& delta, const Matrix& w, Matrix& da) {
  detail::CheckInputGrad(delta, w, da);
  const auto n = static_cast<std::int64_t>(delta.rows());
#pragma omp parallel for schedule(static) if (Worth(delta.rows(), w.size()))
  for (std::int64_t r = 0; r < n; ++r) {
    detail::InputGradRow(delta, w, da, static_cast<std::size_t>(r));
  }
}

void Activate(Activation act, Matrix& z) {
  const auto n = static_cast<std::int64_t>(z.rows());
#pragma omp parallel for schedule(static) if (Worth(z.rows(), 8 * z.cols()))
  for (std::int64_t r = 0; r < n; ++r) {
    detail::ActivateRow(act, z.row(static_cast<std::size_t>(r)));
  }
}

void ActivationBackward(Activation act, const Matrix& out, Matrix& grad) {
  if (!out.SameShape(grad)) throw ShapeError("activation gradient shape");
  const auto n = static_cast<std::int64_t>(out.rows());
#pragma omp parallel for schedule(static) if (Worth(out.rows(), out.cols()))
  for (std::int64_t r = 0; r < n; ++r) {
    const auto i = static_cast<std::size_t>(r);
    detail::ActivationBackwardRow(act, out.row(i), grad.row(i));
  }
}

}  // namespace fan::kernels::parallel
