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

#ifndef FAN_SYNTHETIC_H_
#define FAN_SYNTHETIC_H_

#include <array>
#include <cstdint>
#include <string_view>

#include "fan/csv.h"

namespace fan {

// Planted-bias benchmark with a binary protected column `protected` and six
// features:
//   p_copy      verbatim copy of the protected value
//   proxy_lin1  linear proxy, +-1 shift plus Gaussian noise
//   proxy_lin2  linear proxy with the opposite sign
//   noise_a     N(0, 1)
//   noise_b     N(0, 1) whose sign agrees with noise_a's exactly when the
//               protected value is 0 (XOR proxy; flipped w.p. `xor_flip`)
//   noise_c     N(0, 1), independent of everything
// Each noise column is marginally independent of the protected value; only
// the pair (noise_a, noise_b) reveals it, and only non-linearly.
struct PlantedCopyOptions {
  std::size_t rows = 1000;
  std::uint64_t seed = 7;
  double linear_noise = 0.5;
  double xor_flip = 0.0;
};

inline constexpr std::string_view kPlantedProtected = "protected";
inline constexpr std::array<std::string_view, 3> kPlantedNoiseColumns = {
    "noise_a", "noise_b", "noise_c"};

Table PlantedCopyTable(const PlantedCopyOptions& options = {});

}  // namespace fan

#endif  // FAN_SYNTHETIC_H_
