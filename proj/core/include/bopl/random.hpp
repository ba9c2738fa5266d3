// Copyright 2026 The bopl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BOPL_RANDOM_HPP_
#define BOPL_RANDOM_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace bopl {

// Golden-ratio increment of the splitmix64 generator.
inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ULL;

// One splitmix64 step: advances `state` and returns the mixed output.
std::uint64_t SplitMix64(std::uint64_t& state);

// Seed of the `stream`-th independent sub-experiment of `master`. Used to
// derive per-trial seeds so that trials are independent and reproducible.
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t stream);

// Seeded generator whose outputs are identical on every platform: the
// engine is std::mt19937_64 (fully specified by the standard) and the
// distributions below are implemented here rather than taken from <random>,
// whose algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double Uniform();

  // Uniform integer in [0, n). Requires n > 0.
  std::uint64_t UniformInt(std::uint64_t n);

  // Samples an index with probability proportional to `probs[i]`; the
  // entries are expected to sum to one. Never returns a zero-probability
  // index.
  std::size_t Categorical(std::span<const double> probs);

  // Fisher-Yates shuffle.
  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(UniformInt(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bopl

#endif  // BOPL_RANDOM_HPP_
