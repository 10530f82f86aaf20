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

#include "fan/synthetic.h"

#include <cmath>

#include "fan/rng.h"

namespace fan {

Table PlantedCopyTable(const PlantedCopyOptions& options) {
  Rng rng(DeriveSeed(options.seed, SeedStream::kSynthetic));
  Table t;
  t.header = {"p_copy",  "proxy_lin1", "proxy_lin2", "noise_a",
              "noise_b", "noise_c",    std::string(kPlantedProtected)};
  for (std::size_t i = 0; i < options.rows; ++i) {
    const int p = static_cast<int>(rng.Below(2));
    const double s = p == 1 ? 1.0 : -1.0;
    const double lin1 = s + options.linear_noise * rng.Normal();
    const double lin2 = -s + options.linear_noise * rng.Normal();
    const double a = rng.Normal();
    double sign_b = (a >= 0 ? 1.0 : -1.0) * -s;
    if (rng.Uniform() < options.xor_flip) sign_b = -sign_b;
    const double b = std::abs(rng.Normal()) * sign_b;
    const double c = rng.Normal();
    t.rows.push_back({std::to_string(p), FormatDouble(lin1), FormatDouble(lin2),
                      FormatDouble(a), FormatDouble(b), FormatDouble(c),
                      std::to_string(p)});
  }
  return t;
}

}  // namespace fan
