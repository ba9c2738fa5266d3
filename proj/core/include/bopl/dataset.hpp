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

#ifndef BOPL_DATASET_HPP_
#define BOPL_DATASET_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace bopl {

// One logged bandit interaction (context, action, propensity, reward).
struct LoggedExample {
  std::vector<double> features;
  int action = 0;
  // Probability with which the logging policy chose `action`; in (0, 1].
  double propensity = 1.0;
  // May be negative (e.g. after reward translation).
  double reward = 0.0;

  friend bool operator==(const LoggedExample&, const LoggedExample&) = default;
};

// Throws InvalidArgument / DimensionMismatch unless `example` is a valid
// interaction for a problem with the given action count and context size.
void ValidateExample(const LoggedExample& example, int num_actions,
                     int feature_dim);

// A collection of logged interactions over a fixed action set and context
// dimension. Every stored example satisfies ValidateExample.
class BanditDataset {
 public:
  BanditDataset(int num_actions, int feature_dim,
                std::vector<LoggedExample> examples = {});

  void Add(LoggedExample example);

  int num_actions() const { return num_actions_; }
  int feature_dim() const { return feature_dim_; }
  std::size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }

  const LoggedExample& operator[](std::size_t i) const { return examples_[i]; }
  std::span<const LoggedExample> examples() const { return examples_; }
  auto begin() const { return examples_.begin(); }
  auto end() const { return examples_.end(); }

  friend bool operator==(const BanditDataset&, const BanditDataset&) = default;

 private:
  int num_actions_;
  int feature_dim_;
  std::vector<LoggedExample> examples_;
};

}  // namespace bopl

#endif  // BOPL_DATASET_HPP_
