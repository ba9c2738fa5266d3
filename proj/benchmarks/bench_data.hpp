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

#ifndef BOPL_BENCHMARKS_BENCH_DATA_HPP_
#define BOPL_BENCHMARKS_BENCH_DATA_HPP_

#include <cstddef>
#include <cstdint>

#include "bopl/dataset.hpp"

namespace bopl::bench {

// Bandit log with uniform contexts in [0, 1]^d, uniform logging over
// `num_actions` actions and Bernoulli rewards that favor one action per
// context region.
BanditDataset SyntheticLog(std::size_t n, int num_actions, int feature_dim,
                           std::uint64_t seed = 1);

}  // namespace bopl::bench

#endif  // BOPL_BENCHMARKS_BENCH_DATA_HPP_
