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

// Full-information (supervised) examples and the rewards a bandit learner
// would receive on them.

#ifndef BOPL_SUPERVISED_HPP_
#define BOPL_SUPERVISED_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bopl {

enum class Task {
  kMulticlass,
  kMultilabel,
};

std::string_view TaskName(Task task);
// Accepts "multiclass" and "multilabel". Throws InvalidArgument otherwise.
Task ParseTask(std::string_view name);

struct SupervisedExample {
  std::vector<double> features;
  // Sorted, distinct class indices. Multiclass examples carry exactly one.
  std::vector<int> labels;

  friend bool operator==(const SupervisedExample&,
                         const SupervisedExample&) = default;
};

// Examples over a fixed class set; class indices double as action indices.
struct SupervisedDataset {
  Task task = Task::kMulticlass;
  int num_classes = 0;
  int feature_dim = 0;
  std::vector<SupervisedExample> examples;

  std::size_t size() const { return examples.size(); }

  // Throws InvalidArgument / DimensionMismatch on any invariant violation.
  void Validate() const;

  // The examples at `indices`, in that order.
  SupervisedDataset Subset(std::span<const std::size_t> indices) const;

  friend bool operator==(const SupervisedDataset&,
                         const SupervisedDataset&) = default;
};

// Reward structure of a converted task. Multilabel tasks pay 1 for any true
// label. Multiclass tasks pay 1 for the true class, `partial_credit` for a
// class sharing a group with it, and 0 otherwise.
struct RewardSpec {
  Task task = Task::kMulticlass;
  // Disjoint groups of class indices. Classes in no group are singletons.
  std::vector<std::vector<int>> groups;
  double partial_credit = 0.25;

  // Throws InvalidArgument if groups overlap, contain negative indices or
  // partial_credit is outside [0, 1].
  void Validate() const;

  // Fashion-MNIST: {pullover, coat}, {t-shirt/top, shirt},
  // {sandal, sneaker, ankle boot}.
  static RewardSpec Fashion();
  // Covertype: {spruce/fir, douglas-fir}, {lodgepole pine, ponderosa pine},
  // {cottonwood/willow, aspen}.
  static RewardSpec Covertype();
  // Looks up "none", "fashion" or "covertype" for `task`.
  static RewardSpec Named(std::string_view groups, Task task);

  friend bool operator==(const RewardSpec&, const RewardSpec&) = default;
};

double Reward(const RewardSpec& spec, std::span<const int> labels, int action);

}  // namespace bopl

#endif  // BOPL_SUPERVISED_HPP_
