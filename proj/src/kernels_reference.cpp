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

#include <string>

#include "fan/error.h"
#include "fan/kernels.h"
#include "kernel_ops.h"

namespace fan {

std::string_view ActivationName(Activation act) {
  switch (act) {
    case Activation::kIdentity:
      return "identity";
    case Activation::kRelu:
      return "relu";
    case Activation::kTanh:
      return "tanh";
    case Activation::kSigmoid:
      return "sigmoid";
    case Activation::kSoftmax:
      return "softmax";
  }
  return "unknown";
}

Activation ParseActivation(std::string_view name) {
  for (Activation a : {Activation::kIdentity, Activation::kRelu,
                       Activation::kTanh, Activation::kSigmoid,
                       Activation::kSoftmax}) {
    if (ActivationName(a) == name) return a;
  }
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

namespace kernels::reference {

void Affine(const Matrix& a, const Matrix& w, std::span<const double> b,
            Matrix& z) {
  detail::CheckAffine(a, w, b, z);
  for (std::size_t r = 0; r < a.rows(); ++r) detail::AffineRow(a, w, b, z, r);
}

void WeightGrad(const Matrix& delta, const Matrix& a, Matrix& gw) {
  detail::CheckWeightGrad(delta, a, gw);
  for (std::size_t o = 0; o < gw.rows(); ++o) {
    detail::WeightGradRow(delta, a, gw, o);
  }
}

void BiasGrad(const Matrix& delta, std::span<double> gb) {
  if (gb.size() != delta.cols()) throw ShapeError("bias gradient shape");
  for (std::size_t o = 0; o < gb.size(); ++o) {
    gb[o] = detail::BiasGradEntry(delta, o);
  }
}

void InputGrad(const Matrix& delta, const Matrix& w, Matrix& da) {
  detail::CheckInputGrad(delta, w, da);
  for (std::size_t r = 0; r < delta.rows(); ++r) {
    detail::InputGradRow(delta, w, da, r);
  }
}

void Activate(Activation act, Matrix& z) {
  for (std::size_t r = 0; r < z.rows(); ++r) detail::ActivateRow(act, z.row(r));
}

void ActivationBackward(Activation act, const Matrix& out, Matrix& grad) {
  if (!out.SameShape(grad)) throw ShapeError("activation gradient shape");
  for (std::size_t r = 0; r < out.rows(); ++r) {
    detail::ActivationBackwardRow(act, out.row(r), grad.row(r));
  }
}

}  // namespace kernels::reference
}  // namespace fan
