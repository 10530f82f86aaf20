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

#include "fan/kernels.h"

#include <omp.h>

#include <gtest/gtest.h>

#include "fan/rng.h"

namespace fan {
namespace {

Matrix RandomMatrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (double& v : m.values()) v = rng.Normal();
  return m;
}

class KernelParityTest : public ::testing::TestWithParam<std::size_t> {
 protected:
  void SetUp() override { omp_set_num_threads(4); }
};

// Large row counts cross kParallelThreshold; small ones stay serial.
TEST_P(KernelParityTest, ParallelMatchesReferenceBitForBit) {
  const std::size_t n = GetParam();
  Rng rng(n);
  for (std::size_t in : {1u, 7u, 33u}) {
    for (std::size_t out : {1u, 5u, 40u}) {
      const Matrix a = RandomMatrix(n, in, rng);
      const Matrix w = RandomMatrix(out, in, rng);
      std::vector<double> b(out);
      for (double& v : b) v = rng.Normal();

      Matrix z_ref(n, out), z_par(n, out);
      kernels::reference::Affine(a, w, b, z_ref);
      kernels::parallel::Affine(a, w, b, z_par);
      EXPECT_EQ(z_ref, z_par);

      for (Activation act : {Activation::kRelu, Activation::kTanh,
                             Activation::kSigmoid, Activation::kSoftmax}) {
        Matrix act_ref = z_ref, act_par = z_ref;
        kernels::reference::Activate(act, act_ref);
        kernels::parallel::Activate(act, act_par);
        ASSERT_EQ(act_ref, act_par) << ActivationName(act);

        Matrix g_ref = RandomMatrix(n, out, rng);
        Matrix g_par = g_ref;
        kernels::reference::ActivationBackward(act, act_ref, g_ref);
        kernels::parallel::ActivationBackward(act, act_par, g_par);
        ASSERT_EQ(g_ref, g_par) << ActivationName(act);
      }

      const Matrix delta = RandomMatrix(n, out, rng);
      Matrix gw_ref(out, in), gw_par(out, in);
      kernels::reference::WeightGrad(delta, a, gw_ref);
      kernels::parallel::WeightGrad(delta, a, gw_par);
      EXPECT_EQ(gw_ref, gw_par);

      std::vector<double> gb_ref(out), gb_par(out);
      kernels::reference::BiasGrad(delta, gb_ref);
      kernels::parallel::BiasGrad(delta, gb_par);
      EXPECT_EQ(gb_ref, gb_par);

      Matrix da_ref(n, in), da_par(n, in);
      kernels::reference::InputGrad(delta, w, da_ref);
      kernels::parallel::InputGrad(delta, w, da_par);
      EXPECT_EQ(da_ref, da_par);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(RowCounts, KernelParityTest,
                         ::testing::Values(1, 17, 4096));

TEST(KernelsTest, AffineMatchesHandComputation) {
  const Matrix a{{1, 2}, {3, 4}};
  const Matrix w{{1, 0}, {1, -1}, {0.5, 0.5}};
  const std::vector<double> b{0, 1, -1};
  Matrix z(2, 3);
  kernels::Affine(a, w, b, z);
  EXPECT_EQ(z, (Matrix{{1, 0, 0.5}, {3, 0, 2.5}}));
}

TEST(KernelsTest, ShapeMismatchThrows) {
  const Matrix a(2, 3);
  const Matrix w(4, 2);
  const std::vector<double> b(4);
  Matrix z(2, 4);
  EXPECT_THROW(kernels::Affine(a, w, b, z), std::exception);
  EXPECT_THROW(kernels::reference::Affine(a, w, b, z), std::exception);
}

TEST(KernelsTest, WeightGradIsTransposedProduct) {
  const Matrix delta{{1, 2}, {3, 4}, {5, 6}};
  const Matrix a{{1, 0, 2}, {0, 1, 1}, {1, 1, 0}};
  Matrix gw(2, 3);
  kernels::WeightGrad(delta, a, gw);
  // delta^T * a
  EXPECT_EQ(gw, (Matrix{{6, 8, 5}, {8, 10, 8}}));
}

TEST(KernelsTest, ActivationNamesRoundTrip) {
  for (Activation a : {Activation::kIdentity, Activation::kRelu,
                       Activation::kTanh, Activation::kSigmoid,
                       Activation::kSoftmax}) {
    EXPECT_EQ(ParseActivation(ActivationName(a)), a);
  }
  EXPECT_THROW(ParseActivation("gelu"), std::exception);
}

}  // namespace
}  // namespace fan
