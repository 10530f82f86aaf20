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
#include <numbers>

#include <gtest/gtest.h>

#include "fan/error.h"
#include "fan/rng.h"
#include "gradient_oracle.h"
#include "random_nets.h"

namespace fan {
namespace {

Layer MakeLayer(Matrix w, std::vector<double> b, Activation act) {
  return Layer{std::move(w), std::move(b), act};
}

TEST(ForwardTest, IdentityLayerPassesInputThrough) {
  NetworkParams net;
  net.layers.push_back(
      MakeLayer(Matrix{{1, 0}, {0, 1}}, {0, 0}, Activation::kIdentity));
  EXPECT_EQ(Forward(net, Matrix{{1, 2}}), (Matrix{{1, 2}}));
}

TEST(ForwardTest, SoftmaxOfEqualLogitsIsUniform) {
  NetworkParams net;
  net.layers.push_back(
      MakeLayer(Matrix{{1, 0}, {0, 1}}, {0, 0}, Activation::kSoftmax));
  const Matrix out = Forward(net, Matrix{{0, 0}});
  EXPECT_DOUBLE_EQ(out(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(out(0, 1), 0.5);
}

// Hand-unrolled: z1 = W1 x + b1 = [-0.9, -2, 0.8], relu -> [0, 0, 0.8],
// z2 = [1, -1, 2] . [0, 0, 0.8] + 0.5 = 2.1.
TEST(ForwardTest, TwoLayerReluMatchesHandComputation) {
  NetworkParams net;
  net.layers.push_back(MakeLayer(Matrix{{1, 2}, {-1, 1}, {0.5, -0.5}},
                                 {0.1, 0, -0.2}, Activation::kRelu));
  net.layers.push_back(
      MakeLayer(Matrix{{1, -1, 2}}, {0.5}, Activation::kIdentity));
  const Matrix out = Forward(net, Matrix{{1, -1}});
  ASSERT_EQ(out.rows(), 1u);
  ASSERT_EQ(out.cols(), 1u);
  EXPECT_NEAR(out(0, 0), 2.1, 1e-12);
}

TEST(ForwardTest, RejectsBadInput) {
  const std::size_t sizes[] = {2, 3};
  const Activation acts[] = {Activation::kTanh};
  const NetworkParams net = InitParams(sizes, acts, 1);
  try {
    Forward(net, Matrix(1, 3));
    FAIL() << "expected shape error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kShape);
  }
  try {
    Forward(net, Matrix{{1, std::nan("")}});
    FAIL() << "expected input error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInput);
  }
}

TEST(ForwardTest, RejectsBrokenChain) {
  NetworkParams net;
  net.layers.push_back(MakeLayer(Matrix(3, 2), {0, 0, 0}, Activation::kTanh));
  net.layers.push_back(MakeLayer(Matrix(1, 4), {0}, Activation::kIdentity));
  EXPECT_THROW(net.Validate(), Error);
  EXPECT_THROW(Forward(net, Matrix(1, 2)), Error);
}

TEST(BackwardTest, ZeroLossGradientGivesZeroGradients) {
  const std::size_t sizes[] = {3, 4, 2};
  const Activation acts[] = {Activation::kTanh, Activation::kSigmoid};
  const NetworkParams net = InitParams(sizes, acts, 9);
  const Matrix x{{0.1, -0.3, 2.0}, {1, 1, 1}};
  const ForwardCache cache = ForwardWithCache(net, x);
  const Backprop bp = Backward(net, cache, Matrix(2, 2));
  EXPECT_TRUE(bp.grads.AllZero());
}

TEST(BackwardTest, RejectsMisshapedLossGradient) {
  const std::size_t sizes[] = {3, 2};
  const Activation acts[] = {Activation::kIdentity};
  const NetworkParams net = InitParams(sizes, acts, 9);
  const ForwardCache cache = ForwardWithCache(net, Matrix(4, 3, 0.5));
  try {
    Backward(net, cache, Matrix(4, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kShape);
  }
}

// Single linear layer under MSE: dL/dW = 2/(n*d_out) (y - t)^T x and
// dL/db = 2/(n*d_out) column sums of (y - t), written out with plain loops.
TEST(BackwardTest, LinearLayerMatchesClosedForm) {
  const std::size_t sizes[] = {3, 2};
  const Activation acts[] = {Activation::kIdentity};
  NetworkParams net = InitParams(sizes, acts, 4);
  net.layers[0].bias = {0.3, -0.1};
  const Matrix x{{1, 2, 3}, {-1, 0.5, 2}, {0, 0, 1}, {2, -2, 0.5}};
  const Matrix t{{0, 1}, {1, 0}, {0.5, 0.5}, {-1, 2}};
  const ForwardCache cache = ForwardWithCache(net, x);
  const Backprop bp = Backward(net, cache, MseGrad(cache.output(), t));

  const Matrix& y = cache.output();
  const double scale = 2.0 / (4.0 * 2.0);
  for (std::size_t o = 0; o < 2; ++o) {
    double gb = 0.0;
    for (std::size_t r = 0; r < 4; ++r) gb += scale * (y(r, o) - t(r, o));
    EXPECT_NEAR(bp.grads.bias[0][o], gb, 1e-12);
    for (std::size_t i = 0; i < 3; ++i) {
      double gw = 0.0;
      for (std::size_t r = 0; r < 4; ++r) {
        gw += scale * (y(r, o) - t(r, o)) * x(r, i);
      }
      EXPECT_NEAR(bp.grads.weight[0](o, i), gw, 1e-12);
    }
  }
}

TEST(BackwardTest, TwoHiddenLayersMatchFiniteDifferences) {
  const std::size_t sizes[] = {5, 7, 6, 3};
  const Activation acts[] = {Activation::kTanh, Activation::kSigmoid,
                             Activation::kIdentity};
  NetworkParams net = InitParams(sizes, acts, 2024);
  Rng rng(3);
  for (auto& l : net.layers) {
    for (double& b : l.bias) b = rng.Uniform(-0.5, 0.5);
  }
  Matrix x(6, 5);
  for (double& v : x.values()) v = rng.Normal();
  Matrix target(6, 3);
  for (double& v : target.values()) v = rng.Normal();

  const ForwardCache cache = ForwardWithCache(net, x);
  const Backprop bp = Backward(net, cache, MseGrad(cache.output(), target));
  const GradientSet numeric = testing::NumericGradient(
      net, x, [&](const Matrix& y) { return Mse(y, target); });
  EXPECT_LT(testing::MaxRelativeError(bp.grads, numeric), 1e-4);

  const Matrix numeric_input = testing::NumericInputGradient(
      x, [&](const Matrix& in) { return Mse(Forward(net, in), target); });
  EXPECT_LT(testing::MaxRelativeError(bp.input_grad, numeric_input), 1e-4);
}

TEST(BackwardTest, SoftmaxCrossEntropyMatchesFiniteDifferences) {
  const std::size_t sizes[] = {4, 4, 3};
  const Activation acts[] = {Activation::kRelu, Activation::kSoftmax};
  const NetworkParams net = InitParams(sizes, acts, 77);
  Matrix x{{0.3, -1.2, 0.8, 2.0}, {1.1, 0.4, -0.7, 0.2}, {-0.5, 0.9, 1.5, -1}};
  const std::vector<int> labels{2, 0, 1};
  ASSERT_TRUE(testing::ClearOfKinks(net, x, 1e-3));
  const ForwardCache cache = ForwardWithCache(net, x);
  const Backprop bp =
      Backward(net, cache, CrossEntropyGrad(cache.output(), labels));
  const GradientSet numeric = testing::NumericGradient(
      net, x, [&](const Matrix& y) { return CrossEntropy(y, labels); });
  EXPECT_LT(testing::MaxRelativeError(bp.grads, numeric), 1e-4);
}

// Property: random nets with mixed activations, <= 3 layers, <= 16 units.
TEST(BackwardTest, RandomNetsMatchFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const testing::GradientCase c = testing::RandomGradientCase(seed);
    const ForwardCache cache = ForwardWithCache(c.params, c.input);
    const Backprop bp = Backward(c.params, cache, c.loss_grad(cache.output()));
    const GradientSet numeric =
        testing::NumericGradient(c.params, c.input, c.loss);
    EXPECT_LT(testing::MaxRelativeError(bp.grads, numeric), 1e-4)
        << "seed " << seed;
  }
}

TEST(MseTest, Examples) {
  const Matrix a{{1, 2}, {3, 4}};
  EXPECT_EQ(Mse(a, a), 0.0);
  EXPECT_EQ(Mse(Matrix{{0}}, Matrix{{2}}), 4.0);
  EXPECT_DOUBLE_EQ(Mse(a, Matrix(2, 2)), 7.5);
  EXPECT_THROW(Mse(a, Matrix(1, 2)), Error);
}

TEST(MseTest, Symmetric) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a(3, 4), b(3, 4);
    for (double& v : a.values()) v = rng.Normal();
    for (double& v : b.values()) v = rng.Normal();
    EXPECT_EQ(Mse(a, b), Mse(b, a));
    EXPECT_EQ(Mse(a, a), 0.0);
  }
}

TEST(CrossEntropyTest, Examples) {
  EXPECT_NEAR(CrossEntropy(Matrix{{1, 0}, {0, 1}}, std::vector<int>{0, 1}),
              0.0, 1e-15);
  EXPECT_NEAR(CrossEntropy(Matrix{{0.5, 0.5}}, std::vector<int>{1}),
              std::numbers::ln2, 1e-12);
  EXPECT_NEAR(CrossEntropy(Matrix{{0.9, 0.1}}, std::vector<int>{1}),
              -std::log(0.1), 1e-12);
  EXPECT_NEAR(CrossEntropy(Matrix{{0.9, 0.1}}, Matrix{{0, 1}}),
              -std::log(0.1), 1e-12);
}

TEST(CrossEntropyTest, FloorCapsConfidentMistakes) {
  EXPECT_NEAR(CrossEntropy(Matrix{{1, 0}}, std::vector<int>{1}),
              -std::log(kProbabilityFloor), 1e-9);
}

TEST(CrossEntropyTest, RejectsUnnormalizedRows) {
  try {
    CrossEntropy(Matrix{{0.7, 0.7}}, std::vector<int>{0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInput);
  }
  EXPECT_THROW(CrossEntropy(Matrix{{0.5, 0.5}}, Matrix{{0.5, 0.5}}), Error);
}

TEST(CrossEntropyTest, NonNegativeOnSoftmaxOutputs) {
  Rng rng(11);
  const std::size_t sizes[] = {3, 4};
  const Activation acts[] = {Activation::kSoftmax};
  for (int trial = 0; trial < 20; ++trial) {
    const NetworkParams net = InitParams(sizes, acts, trial);
    Matrix x(8, 3);
    for (double& v : x.values()) v = 3 * rng.Normal();
    const Matrix p = Forward(net, x);
    for (std::size_t r = 0; r < p.rows(); ++r) {
      double sum = 0.0;
      for (double v : p.row(r)) {
        EXPECT_GT(v, 0.0);
        EXPECT_LT(v, 1.0);
        sum += v;
      }
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
    std::vector<int> labels(8);
    for (int& l : labels) l = static_cast<int>(rng.Below(4));
    EXPECT_GE(CrossEntropy(p, labels), 0.0);
  }
}

NetworkParams SingleWeight(double w) {
  NetworkParams net;
  net.layers.push_back(MakeLayer(Matrix{{w}}, {0.0}, Activation::kIdentity));
  return net;
}

GradientSet SingleGrad(double g) {
  GradientSet grads;
  grads.weight.push_back(Matrix{{g}});
  grads.bias.push_back({0.0});
  return grads;
}

TEST(OptimizerTest, ZeroLearningRateLeavesParamsUnchanged) {
  const std::size_t sizes[] = {3, 2};
  const Activation acts[] = {Activation::kTanh};
  for (OptimizerKind kind : {OptimizerKind::kSgd, OptimizerKind::kAdam}) {
    NetworkParams net = InitParams(sizes, acts, 3);
    const NetworkParams before = net;
    GradientSet g = GradientSet::ZerosLike(net);
    for (double& v : g.weight[0].values()) v = 0.7;
    OptimizerState state = OptimizerState::For(net, {kind, 0.0});
    OptimizerStep(net, g, state);
    EXPECT_EQ(net, before);
    EXPECT_EQ(state.step, 1);
  }
}

TEST(OptimizerTest, SgdStep) {
  NetworkParams net = SingleWeight(1.0);
  OptimizerState state = OptimizerState::For(net, {OptimizerKind::kSgd, 0.1});
  OptimizerStep(net, SingleGrad(0.5), state);
  EXPECT_DOUBLE_EQ(net.layers[0].weight(0, 0), 0.95);
}

TEST(OptimizerTest, SgdWeightDecay) {
  NetworkParams net = SingleWeight(2.0);
  OptimizerState state =
      OptimizerState::For(net, {OptimizerKind::kSgd, 0.1, 0.5});
  OptimizerStep(net, SingleGrad(0.0), state);
  // w - lr * (g + wd * w) = 2 - 0.1 * 1
  EXPECT_DOUBLE_EQ(net.layers[0].weight(0, 0), 1.9);
}

// At t = 1 the bias-corrected moments are g and g^2, so the step is
// lr * g / (|g| + eps).
TEST(OptimizerTest, AdamFirstStepMovesByLearningRate) {
  const std::size_t sizes[] = {4, 3};
  const Activation acts[] = {Activation::kIdentity};
  NetworkParams net = InitParams(sizes, acts, 8);
  const NetworkParams before = net;
  GradientSet g = GradientSet::ZerosLike(net);
  for (double& v : g.weight[0].values()) v = 1.0;
  for (double& v : g.bias[0]) v = 1.0;
  OptimizerState state = OptimizerState::For(net, {OptimizerKind::kAdam, 1e-3});
  OptimizerStep(net, g, state);
  const double expected = 1e-3 * 1.0 / (1.0 + 1e-8);
  for (std::size_t j = 0; j < net.layers[0].weight.size(); ++j) {
    EXPECT_NEAR(before.layers[0].weight.values()[j] -
                    net.layers[0].weight.values()[j],
                expected, 1e-15);
  }
  EXPECT_NEAR(-net.layers[0].bias[0], expected, 1e-15);
}

TEST(OptimizerTest, StepCounterIncreases) {
  NetworkParams net = SingleWeight(1.0);
  OptimizerState state = OptimizerState::For(net, {});
  for (int i = 1; i <= 5; ++i) {
    OptimizerStep(net, SingleGrad(0.1), state);
    EXPECT_EQ(state.step, i);
  }
}

TEST(OptimizerTest, NonFiniteGradientIsRejectedAtomically) {
  NetworkParams net = SingleWeight(1.0);
  OptimizerState state = OptimizerState::For(net, {});
  const NetworkParams before = net;
  try {
    OptimizerStep(net, SingleGrad(std::nan("")), state);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTraining);
  }
  EXPECT_EQ(net, before);
  EXPECT_EQ(state.step, 0);
}

TEST(OptimizerTest, IncongruentGradientsThrow) {
  NetworkParams net = SingleWeight(1.0);
  OptimizerState state = OptimizerState::For(net, {});
  GradientSet g;
  EXPECT_THROW(OptimizerStep(net, g, state), Error);
}

TEST(InitTest, DeterministicPerSeed) {
  const std::size_t sizes[] = {6, 3, 6};
  const Activation acts[] = {Activation::kTanh, Activation::kIdentity};
  EXPECT_EQ(InitParams(sizes, acts, 42), InitParams(sizes, acts, 42));
  EXPECT_NE(InitParams(sizes, acts, 42), InitParams(sizes, acts, 43));
}

TEST(InitTest, XavierBoundAndZeroBias) {
  const std::size_t sizes[] = {10, 7, 3};
  const Activation acts[] = {Activation::kRelu, Activation::kSoftmax};
  const NetworkParams net = InitParams(sizes, acts, 5);
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const double bound = std::sqrt(6.0 / double(sizes[i] + sizes[i + 1]));
    for (double w : net.layers[i].weight.values()) {
      EXPECT_LE(std::abs(w), bound);
    }
    for (double b : net.layers[i].bias) EXPECT_EQ(b, 0.0);
  }
}

TEST(InitTest, RejectsEmptySpec) {
  const std::size_t only_input[] = {4};
  try {
    InitParams(only_input, std::span<const Activation>{}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
  }
  const std::size_t zero[] = {4, 0};
  const Activation acts[] = {Activation::kTanh};
  EXPECT_THROW(InitParams(zero, acts, 1), Error);
}

TEST(DeterminismTest, ForwardBackwardUpdateBitIdentical) {
  auto run = [] {
    const std::size_t sizes[] = {5, 8, 5};
    const Activation acts[] = {Activation::kTanh, Activation::kIdentity};
    NetworkParams net = InitParams(sizes, acts, 1234);
    Rng rng(99);
    Matrix x(16, 5);
    for (double& v : x.values()) v = rng.Normal();
    OptimizerState state = OptimizerState::For(net, {});
    for (int i = 0; i < 10; ++i) {
      const ForwardCache cache = ForwardWithCache(net, x);
      OptimizerStep(net, Backward(net, cache, MseGrad(cache.output(), x)).grads,
                    state);
    }
    return net;
  };
  EXPECT_EQ(run(), run());
}

}  // namespace
}  // namespace fan
