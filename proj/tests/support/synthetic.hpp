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

// Random instances shared by the unit and acceptance tests.

#ifndef BOPL_TESTS_SYNTHETIC_HPP_
#define BOPL_TESTS_SYNTHETIC_HPP_

#include <cstddef>
#include <vector>

#include "bopl/dataset.hpp"
#include "bopl/policy.hpp"
#include "bopl/random.hpp"
#include "bopl/supervised.hpp"
#include "bopl/tree.hpp"

namespace bopl::testing {

double UniformIn(Rng& rng, double lo, double hi);
std::vector<double> UniformVector(Rng& rng, std::size_t n, double lo, double hi);

// A one-split tree on feature `feature` of the augmented row.
Tree Stump(int feature, double threshold, double left, double right);

// A random tree of at most `depth` levels over `num_features` augmented
// features with thresholds in [-1, 1] and leaves in [-1, 1].
Tree RandomTree(Rng& rng, std::size_t num_features, int depth);

// Random ensemble over contexts of `feature_dim` features and `num_actions`
// actions with weights in [-2, 2].
Ensemble RandomEnsemble(Rng& rng, int num_actions, int feature_dim,
                        std::size_t members, int depth = 2);

struct LogSpec {
  std::size_t n = 20;
  int num_actions = 3;
  int feature_dim = 2;
  double reward_lo = -1.0;
  double reward_hi = 1.0;
  double min_propensity = 0.05;
  // Rewards are rounded to {0, 1} when set.
  bool binary_rewards = false;
};

// Contexts uniform in [-1, 1]^d, uniform actions, propensities uniform in
// [min_propensity, 1], rewards uniform in [reward_lo, reward_hi].
BanditDataset RandomLog(Rng& rng, const LogSpec& spec);

// Multiclass data whose label is the argmax of a fixed linear map of the
// features plus noise; learnable but not separable.
SupervisedDataset LinearMulticlass(Rng& rng, std::size_t n, int num_classes,
                                   int feature_dim, double noise = 0.5);

}  // namespace bopl::testing

#endif  // BOPL_TESTS_SYNTHETIC_HPP_
