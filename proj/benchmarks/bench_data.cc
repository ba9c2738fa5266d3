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

#include "bench_data.hpp"

#include <vector>

#include "bopl/random.hpp"

namespace bopl::bench {

BanditDataset SyntheticLog(std::size_t n, int num_actions, int feature_dim,
                           std::uint64_t seed) {
  Rng rng(seed);
  BanditDataset data(num_actions, feature_dim);
  for (std::size_t i = 0; i < n; ++i) {
    LoggedExample e;
    e.features.resize(static_cast<std::size_t>(feature_dim));
    for (double& x : e.features) x = rng.Uniform();
    e.action = static_cast<int>(rng.UniformInt(static_cast<std::uint64_t>(num_actions)));
    e.propensity = 1.0 / num_actions;
    const int best = static_cast<int>(e.features[0] * num_actions) % num_actions;
    e.reward = rng.Uniform() < (e.action == best ? 0.8 : 0.2) ? 1.0 : 0.0;
    data.Add(std::move(e));
  }
  return data;
}

}  // namespace bopl::bench
