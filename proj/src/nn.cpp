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

#include "fan/nn.h"

#include <cmath>
#include <cstring>
#include <string>

#include "fan/error.h"
#include "fan/rng.h"

namespace fan {

std::size_t NetworkParams::input_size() const {
  return layers.empty() ? 0 : layers.front().inputs();
}

std::size_t NetworkParams::output_size() const {
  return layers.empty() ? 0 : layers.back().outputs();
}

std::size_t NetworkParams::parameter_count() const {
  std::size_t count = 0;
  for (const auto& l : layers) count += l.weight.size() + l.bias.size();
  return count;
}

bool NetworkParams::AllFinite() const {
  for (const auto& l : layers) {
    if (!l.weight.AllFinite()) return false;
    for (double b : l.bias) {
      if (!std::isfinite(b)) return false;
    }
  }
  return true;
}

void NetworkParams::Validate() const {
  if (layers.empty()) throw ShapeError("network has no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const Layer& l = layers[i];
    if (l.bias.size() != l.outputs()) {
      throw ShapeError("layer " + std::to_string(i) + ": bias size " +
                       std::to_string(l.bias.size()) + " != " +
                       std::to_string(l.outputs()));
    }
    if (i > 0 && layers[i - 1].outputs() != l.inputs()) {
      throw ShapeError("layer " + std::to_string(i) + " expects " +
                       std::to_string(l.inputs()) + " inputs but layer " +
                       std::to_string(i - 1) + " produces " +
                       std::to_string(layers[i - 1].outputs()));
    }
  }
}

std::uint64_t NetworkParams::Fingerprint() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::span<const double> values) {
    for (double v : values) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      for (int b = 0; b < 8; ++b) {
        h ^= (bits >> (8 * b)) & 0xff;
        h *= 1099511628211ULL;
      }
    }
  };
  for (const auto& l : layers) {
    mix(l.weight.values());
    mix(l.bias);
  }
  return h;
}

GradientSet GradientSet::ZerosLike(const NetworkParams& params) {
  GradientSet g;
  for (const auto& l : params.layers) {
    g.weight.emplace_back(l.weight.rows(), l.weight.cols());
    g.bias.emplace_back(l.bias.size(), 0.0);
  }
  return g;
}

bool GradientSet::AllFinite() const {
  for (const auto& w : weight) {
    if (!w.AllFinite()) return false;
  }
  for (const auto& b : bias) {
    for (double v : b) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

bool GradientSet::CongruentWith(const NetworkParams& params) const {
  if (weight.size() != params.layers.size() ||
      bias.size() != params.layers.size()) {
    return false;
  }
  for (std::size_t i = 0; i < weight.size(); ++i) {
    if (!weight[i].SameShape(params.layers[i].weight) ||
        bias[i].size() != params.layers[i].bias.size()) {
      return false;
    }
  }
  return true;
}

void GradientSet::Axpy(double scale, const GradientSet& other) {
  if (other.weight.size() != weight.size()) {
    throw ShapeError("gradient sets differ in layer count");
  }
  for (std::size_t i = 0; i < weight.size(); ++i) {
    if (!weight[i].SameShape(other.weight[i]) ||
        bias[i].size() != other.bias[i].size()) {
      throw ShapeError("gradient sets differ in layer shape");
    }
    auto dst = weight[i].values();
    auto src = other.weight[i].values();
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += scale * src[j];
    for (std::size_t j = 0; j < bias[i].size(); ++j) {
      bias[i][j] += scale * other.bias[i][j];
    }
  }
}

bool GradientSet::AllZero() const {
  for (const auto& w : weight) {
    for (double v : w.values()) {
      if (v != 0.0) return false;
    }
  }
  for (const auto& b : bias) {
    for (double v : b) {
      if (v != 0.0) return false;
    }
  }
  return true;
}

NetworkParams InitParams(std::span<const std::size_t> layer_sizes,
                         std::span<const Activation> activations,
                         std::uint64_t seed) {
  if (layer_sizes.size() < 2) {
    throw ConfigError("network needs an input size and at least one layer");
  }
  if (activations.size() != layer_sizes.size() - 1) {
    throw ConfigError("expected one activation per layer");
  }
  for (std::size_t s : layer_sizes) {
    if (s == 0) throw ConfigError("layer sizes must be positive");
  }
  Rng rng(seed);
  NetworkParams params;
  for (std::size_t i = 0; i + 1 < layer_sizes.size(); ++i) {
    const std::size_t fan_in = layer_sizes[i];
    const std::size_t fan_out = layer_sizes[i + 1];
    const double bound =
        std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Layer layer{Matrix(fan_out, fan_in), std::vector<double>(fan_out, 0.0),
                activations[i]};
    for (double& w : layer.weight.values()) w = rng.Uniform(-bound, bound);
    params.layers.push_back(std::move(layer));
  }
  return params;
}

namespace {

void CheckInput(const NetworkParams& params, const Matrix& input) {
  params.Validate();
  if (input.cols() != params.input_size()) {
    throw ShapeError("input has " + std::to_string(input.cols()) +
                     " columns, network expects " +
                     std::to_string(params.input_size()));
  }
  if (!input.AllFinite()) throw InputError("input contains non-finite values");
}

}  // namespace

ForwardCache ForwardWithCache(const NetworkParams& params,
                              const Matrix& input) {
  CheckInput(params, input);
  ForwardCache cache;
  cache.outputs.reserve(params.layers.size() + 1);
  cache.outputs.push_back(input);
  for (const Layer& l : params.layers) {
    Matrix z(input.rows(), l.outputs());
    kernels::Affine(cache.outputs.back(), l.weight, l.bias, z);
    kernels::Activate(l.activation, z);
    cache.outputs.push_back(std::move(z));
  }
  return cache;
}

Matrix Forward(const NetworkParams& params, const Matrix& input) {
  CheckInput(params, input);
  Matrix current = input;
  for (const Layer& l : params.layers) {
    Matrix z(current.rows(), l.outputs());
    kernels::Affine(current, l.weight, l.bias, z);
    kernels::Activate(l.activation, z);
    current = std::move(z);
  }
  return current;
}

Backprop Backward(const NetworkParams& params, const ForwardCache& cache,
                  const Matrix& loss_grad) {
  if (cache.outputs.size() != params.layers.size() + 1) {
    throw ShapeError("forward cache does not match network depth");
  }
  if (!loss_grad.SameShape(cache.output())) {
    throw ShapeError("loss gradient is " + std::to_string(loss_grad.rows()) +
                     "x" + std::to_string(loss_grad.cols()) +
                     ", network output is " +
                     std::to_string(cache.output().rows()) + "x" +
                     std::to_string(cache.output().cols()));
  }
  Backprop result{GradientSet::ZerosLike(params), {}};
  Matrix delta = loss_grad;
  for (std::size_t i = params.layers.size(); i-- > 0;) {
    const Layer& l = params.layers[i];
    kernels::ActivationBackward(l.activation, cache.outputs[i + 1], delta);
    kernels::WeightGrad(delta, cache.outputs[i], result.grads.weight[i]);
    kernels::BiasGrad(delta, result.grads.bias[i]);
    Matrix upstream(delta.rows(), l.inputs());
    kernels::InputGrad(delta, l.weight, upstream);
    delta = std::move(upstream);
  }
  result.input_grad = std::move(delta);
  return result;
}

double Mse(const Matrix& y, const Matrix& x) {
  if (!y.SameShape(x)) throw ShapeError("mse: operands differ in shape");
  if (y.empty()) return 0.0;
  double acc = 0.0;
  auto a = y.values();
  auto b = x.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.size());
}

Matrix MseGrad(const Matrix& y, const Matrix& x) {
  if (!y.SameShape(x)) throw ShapeError("mse: operands differ in shape");
  Matrix g(y.rows(), y.cols());
  const double scale = 2.0 / static_cast<double>(y.size());
  auto a = y.values();
  auto b = x.values();
  auto out = g.values();
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = scale * (a[i] - b[i]);
  return g;
}

namespace {

void CheckProbabilities(const Matrix& probs, std::size_t n_labels) {
  if (probs.rows() != n_labels) {
    throw ShapeError("cross entropy: " + std::to_string(probs.rows()) +
                     " prediction rows for " + std::to_string(n_labels) +
                     " labels");
  }
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    double sum = 0.0;
    for (double p : probs.row(r)) {
      if (!(p >= 0.0)) throw InputError("cross entropy: negative probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw InputError("cross entropy: row " + std::to_string(r) +
                       " sums to " + std::to_string(sum));
    }
  }
}

}  // namespace

double CrossEntropy(const Matrix& probs, std::span<const int> labels) {
  CheckProbabilities(probs, labels.size());
  if (labels.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (labels[r] < 0 || static_cast<std::size_t>(labels[r]) >= probs.cols()) {
      throw InputError("cross entropy: label out of range");
    }
    acc -= std::log(std::max(probs(r, labels[r]), kProbabilityFloor));
  }
  return acc / static_cast<double>(labels.size());
}

double CrossEntropy(const Matrix& probs, const Matrix& one_hot) {
  if (!probs.SameShape(one_hot)) {
    throw ShapeError("cross entropy: target shape differs from predictions");
  }
  std::vector<int> labels(one_hot.rows());
  for (std::size_t r = 0; r < one_hot.rows(); ++r) {
    int hot = -1;
    for (std::size_t c = 0; c < one_hot.cols(); ++c) {
      const double v = one_hot(r, c);
      if (v == 1.0 && hot < 0) {
        hot = static_cast<int>(c);
      } else if (v != 0.0) {
        throw InputError("cross entropy: target row " + std::to_string(r) +
                         " is not one-hot");
      }
    }
    if (hot < 0) {
      throw InputError("cross entropy: target row " + std::to_string(r) +
                       " is not one-hot");
    }
    labels[r] = hot;
  }
  return CrossEntropy(probs, labels);
}

Matrix CrossEntropyGrad(const Matrix& probs, std::span<const int> labels) {
  if (probs.rows() != labels.size()) {
    throw ShapeError("cross entropy: label count differs from rows");
  }
  Matrix g(probs.rows(), probs.cols());
  const double inv_n = 1.0 / static_cast<double>(labels.size());
  for (std::size_t r = 0; r < labels.size(); ++r) {
    const double p = probs(r, labels[r]);
    // The floor is a constant below kProbabilityFloor, so its slope is zero.
    if (p > kProbabilityFloor) g(r, labels[r]) = -inv_n / p;
  }
  return g;
}

OptimizerState OptimizerState::For(const NetworkParams& params,
                                   const OptimizerSettings& settings) {
  if (!(settings.learning_rate >= 0.0) || !(settings.weight_decay >= 0.0)) {
    throw ConfigError("learning rate and weight decay must be non-negative");
  }
  OptimizerState state;
  state.settings = settings;
  if (settings.kind == OptimizerKind::kAdam) {
    state.first_moment = GradientSet::ZerosLike(params);
    state.second_moment = GradientSet::ZerosLike(params);
  }
  return state;
}

void OptimizerStep(NetworkParams& params, const GradientSet& grads,
                   OptimizerState& state) {
  if (!grads.CongruentWith(params)) {
    throw ShapeError("gradient set does not match network shape");
  }
  if (!grads.AllFinite()) throw TrainingError("non-finite gradient");
  const OptimizerSettings& s = state.settings;
  const std::int64_t t = state.step + 1;

  NetworkParams next = params;
  GradientSet m = state.first_moment;
  GradientSet v = state.second_moment;
  const bool adam = s.kind == OptimizerKind::kAdam;
  const double c1 = adam ? 1.0 - std::pow(s.beta1, static_cast<double>(t)) : 1;
  const double c2 = adam ? 1.0 - std::pow(s.beta2, static_cast<double>(t)) : 1;

  auto update = [&](double& w, double g, double& m1, double& m2) {
    if (adam) {
      m1 = s.beta1 * m1 + (1.0 - s.beta1) * g;
      m2 = s.beta2 * m2 + (1.0 - s.beta2) * g * g;
      w -= s.learning_rate * (m1 / c1) / (std::sqrt(m2 / c2) + s.epsilon);
    } else {
      w -= s.learning_rate * g;
    }
  };
  double unused1 = 0.0;
  double unused2 = 0.0;
  for (std::size_t i = 0; i < next.layers.size(); ++i) {
    auto w = next.layers[i].weight.values();
    auto gw = grads.weight[i].values();
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double g = gw[j] + s.weight_decay * w[j];
      if (adam) {
        update(w[j], g, m.weight[i].values()[j], v.weight[i].values()[j]);
      } else {
        update(w[j], g, unused1, unused2);
      }
    }
    auto& b = next.layers[i].bias;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (adam) {
        update(b[j], grads.bias[i][j], m.bias[i][j], v.bias[i][j]);
      } else {
        update(b[j], grads.bias[i][j], unused1, unused2);
      }
    }
  }
  if (!next.AllFinite()) throw TrainingError("update produced non-finite weights");
  params = std::move(next);
  state.first_moment = std::move(m);
  state.second_moment = std::move(v);
  state.step = t;
}

}  // namespace fan
