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

#ifndef FAN_RNG_H_
#define FAN_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace fan {

// Named seed streams keep independent consumers (autoencoder init, adversary
// pool, audit networks, splits) from sharing random sequences.
enum class SeedStream : std::uint64_t {
  kAutoencoder = 1,
  kAdversaryPool = 2,
  kAudit = 3,
  kSplit = 4,
  kSynthetic = 5,
};

// splitmix64 finalizer over (base, stream, index).
std::uint64_t DeriveSeed(std::uint64_t base, SeedStream stream,
                         std::uint64_t index = 0);

// Deterministic generator. Distributions are implemented here rather than
// through <random> so draws do not depend on the standard library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform on {0, ..., n - 1}; n > 0.
  std::uint64_t Below(std::uint64_t n);
  double Normal();

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[Below(i)]);
    }
  }
  template <typename T>
  void Shuffle(std::vector<T>& items) {
    Shuffle(std::span<T>(items));
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fan

#endif  // FAN_RNG_H_
