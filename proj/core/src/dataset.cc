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

#include "bopl/dataset.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "bopl/error.hpp"

namespace bopl {

void ValidateExample(const LoggedExample& example, int num_actions,
                     int feature_dim) {
  if (static_cast<int>(example.features.size()) != feature_dim) {
    throw DimensionMismatch("logged example has " +
                            std::to_string(example.features.size()) +
                            " features, expected " + std::to_string(feature_dim));
  }
  if (example.action < 0 || example.action >= num_actions) {
    throw InvalidArgument("logged action " + std::to_string(example.action) +
                          " outside [0, " + std::to_string(num_actions) + ")");
  }
  if (!(example.propensity > 0.0 && example.propensity <= 1.0)) {
    throw InvalidArgument("propensity must lie in (0, 1], got " +
                          std::to_string(example.propensity));
  }
  if (!std::isfinite(example.reward)) {
    throw InvalidArgument("non-finite reward");
  }
  for (double x : example.features) {
    if (!std::isfinite(x)) throw InvalidArgument("non-finite feature value");
  }
}

BanditDataset::BanditDataset(int num_actions, int feature_dim,
                             std::vector<LoggedExample> examples)
    : num_actions_(num_actions),
      feature_dim_(feature_dim),
      examples_(std::move(examples)) {
  if (num_actions_ < 1) throw InvalidArgument("num_actions must be positive");
  if (feature_dim_ < 0) throw InvalidArgument("feature_dim must be nonnegative");
  for (const LoggedExample& e : examples_) {
    ValidateExample(e, num_actions_, feature_dim_);
  }
}

void BanditDataset::Add(LoggedExample example) {
  ValidateExample(example, num_actions_, feature_dim_);
  examples_.push_back(std::move(example));
}

}  // namespace bopl
