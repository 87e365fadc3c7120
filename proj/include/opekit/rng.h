/*
* Copyright 2026 The ope-kit Authors.
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     https://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
* ============================================================================
*/
// Deterministic random streams. Every stochastic step in the library takes an
// explicit Rng; independent work items derive their stream from a tuple of
// integers so results do not depend on scheduling.
#ifndef OPEKIT_RNG_H_
#define OPEKIT_RNG_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace opekit {

// One step of the splitmix64 sequence.
inline std::uint64_t SplitMix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Hashes (master_seed, k1, k2, ...) into a 64-bit seed.
inline std::uint64_t DeriveSeed(std::uint64_t master,
                                std::initializer_list<std::uint64_t> keys) {
  std::uint64_t state = master;
  std::uint64_t h = SplitMix64(state);
  for (std::uint64_t k : keys) {
    state ^= k + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
    h = SplitMix64(state);
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, std::initializer_list<std::uint64_t> keys)
      : engine_(DeriveSeed(master, keys)) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on the open interval (0, 1).
  double Uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double Normal() { return normal_(engine_); }
  double Normal(double mean, double sd) { return mean + sd * Normal(); }

  // Uniform integer in [0, n).
  std::size_t Index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  // Draws an index with probability proportional to weights[k].
  std::size_t Categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double target = Uniform() * total;
    double cum = 0.0;
    std::size_t last = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (weights[k] <= 0.0) continue;
      cum += weights[k];
      last = k;
      if (target < cum) return k;
    }
    // Rounding left target at the very top of the range.
    return last;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace opekit

#endif  // OPEKIT_RNG_H_
