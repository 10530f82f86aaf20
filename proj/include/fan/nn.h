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

#ifndef FAN_NN_H_
#define FAN_NN_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fan/kernels.h"
#include "fan/matrix.h"

namespace fan {

// Probability floor applied before taking logarithms.
inline constexpr double kProbabilityFloor = 1e-12;

struct Layer {
  Matrix weight;             // [out x in]
  std::vector<double> bias;  // [out]
  Activation activation = Activation::kIdentity;

  std::size_t inputs() const { return weight.cols(); }
  std::size_t outputs() const { return weight.rows(); }

  friend bool operator==(const Layer&, const Layer&) = default;
};

// Weights of a dense feed-forward stack. Used for both the autoencoder and
// every adversary network.
struct NetworkParams {
  std::vector<Layer> layers;

  std::size_t input_size() const;
  std::size_t output_size() const;
  std::size_t parameter_count() const;
  bool AllFinite() const;
  // Throws ShapeError if adjacent layers do not chain.
  void Validate() const;
  // FNV-1a over the raw parameter bytes; used to assert that an update left
  // a network untouched.
  std::uint64_t Fingerprint() const;

  friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

struct GradientSet {
  std::vector<Matrix> weight;
  std::vector<std::vector<double>> bias;

  static GradientSet ZerosLike(const NetworkParams& params);
  bool AllFinite() const;
  bool CongruentWith(const NetworkParams& params) const;
  // this += scale * other
  void Axpy(double scale, const GradientSet& other);
  bool AllZero() const;
};

// Layer outputs from a forward pass; outputs[0] is the input itself.
struct ForwardCache {
  std::vector<Matrix> outputs;

  const Matrix& input() const { return outputs.front(); }
  const Matrix& output() const { return outputs.back(); }
};

struct Backprop {
  GradientSet grads;
  Matrix input_grad;  // dL/d(input), same shape as the input
};

NetworkParams InitParams(std::span<const std::size_t> layer_sizes,
                         std::span<const Activation> activations,
                         std::uint64_t seed);

Matrix Forward(const NetworkParams& params, const Matrix& input);
ForwardCache ForwardWithCache(const NetworkParams& params, const Matrix& input);

// Exact gradients of a scalar loss given dL/d(output) for the cached pass.
Backprop Backward(const NetworkParams& params, const ForwardCache& cache,
                  const Matrix& loss_grad);

// Mean over all entries of (y - x)^2.
double Mse(const Matrix& y, const Matrix& x);
// d Mse / d y
Matrix MseGrad(const Matrix& y, const Matrix& x);

// -(1/n) sum_i log max(probs[i, labels[i]], floor)
double CrossEntropy(const Matrix& probs, std::span<const int> labels);
// One-hot target overload; rows of `one_hot` must be exact indicators.
double CrossEntropy(const Matrix& probs, const Matrix& one_hot);
// d CrossEntropy / d probs
Matrix CrossEntropyGrad(const Matrix& probs, std::span<const int> labels);

enum class OptimizerKind { kSgd, kAdam };

struct OptimizerSettings {
  OptimizerKind kind = OptimizerKind::kAdam;
  double learning_rate = 1e-3;
  double weight_decay = 0.0;  // applied to weights, not biases
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct OptimizerState {
  OptimizerSettings settings;
  GradientSet first_moment;
  GradientSet second_moment;
  std::int64_t step = 0;

  static OptimizerState For(const NetworkParams& params,
                            const OptimizerSettings& settings);
};

// Applies one update in place. Throws TrainingError, leaving params and
// state untouched, if the gradients or the updated weights are non-finite.
void OptimizerStep(NetworkParams& params, const GradientSet& grads,
                   OptimizerState& state);

}  // namespace fan

#endif  // FAN_NN_H_
