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

#ifndef FAN_KERNELS_H_
#define FAN_KERNELS_H_

#include <span>
#include <string_view>

#include "fan/matrix.h"

namespace fan {

enum class Activation { kIdentity, kRelu, kTanh, kSigmoid, kSoftmax };

std::string_view ActivationName(Activation act);
// Throws ConfigError on an unknown name.
Activation ParseActivation(std::string_view name);

// Dense-layer kernels. Every output element is produced by exactly one
// thread with a fixed summation order, so the parallel kernels are
// bit-identical to the serial reference regardless of thread count.
//
// Shapes: a[n x in], w[out x in], z[n x out], delta[n x out].
namespace kernels {

namespace reference {

void Affine(const Matrix& a, const Matrix& w, std::span<const double> b,
            Matrix& z);
void WeightGrad(const Matrix& delta, const Matrix& a, Matrix& gw);
void BiasGrad(const Matrix& delta, std::span<double> gb);
void InputGrad(const Matrix& delta, const Matrix& w, Matrix& da);
void Activate(Activation act, Matrix& z);
// grad <- dL/dz given grad = dL/d(out) and the activated output `out`.
void ActivationBackward(Activation act, const Matrix& out, Matrix& grad);

}  // namespace reference

namespace parallel {

void Affine(const Matrix& a, const Matrix& w, std::span<const double> b,
            Matrix& z);
void WeightGrad(const Matrix& delta, const Matrix& a, Matrix& gw);
void BiasGrad(const Matrix& delta, std::span<double> gb);
void InputGrad(const Matrix& delta, const Matrix& w, Matrix& da);
void Activate(Activation act, Matrix& z);
void ActivationBackward(Activation act, const Matrix& out, Matrix& grad);

}  // namespace parallel

// Default entry points used by the network engine.
using parallel::ActivationBackward;
using parallel::Activate;
using parallel::Affine;
using parallel::BiasGrad;
using parallel::InputGrad;
using parallel::WeightGrad;

// Work (rows x inner dimension) below which the parallel kernels stay
// on the calling thread.
inline constexpr std::size_t kParallelThreshold = 1 << 15;

}  // namespace kernels
}  // namespace fan

#endif  // FAN_KERNELS_H_
