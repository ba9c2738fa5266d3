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

#include "bopl/supervised.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "bopl/error.hpp"

namespace bopl {

std::string_view TaskName(Task task) {
  return task == Task::kMulticlass ? "multiclass" : "multilabel";
}

Task ParseTask(std::string_view name) {
  if (name == "multiclass") return Task::kMulticlass;
  if (name == "multilabel") return Task::kMultilabel;
  throw InvalidArgument("unknown task '" + std::string(name) + "'");
}

void SupervisedDataset::Validate() const {
  if (num_classes < 1) throw InvalidArgument("num_classes must be positive");
  if (feature_dim < 0) throw InvalidArgument("feature_dim must be nonnegative");
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const SupervisedExample& e = examples[i];
    const std::string where = "example " + std::to_string(i);
    if (static_cast<int>(e.features.size()) != feature_dim) {
      throw DimensionMismatch(where + " has " + std::to_string(e.features.size()) +
                              " features, expected " + std::to_string(feature_dim));
    }
    for (double x : e.features) {
      if (!std::isfinite(x)) throw InvalidArgument(where + ": non-finite feature");
    }
    if (task == Task::kMulticlass && e.labels.size() != 1) {
      throw InvalidArgument(where + ": multiclass examples need exactly one label");
    }
    for (std::size_t k = 0; k < e.labels.size(); ++k) {
      if (e.labels[k] < 0 || e.labels[k] >= num_classes) {
        throw InvalidArgument(where + ": label " + std::to_string(e.labels[k]) +
                              " outside [0, " + std::to_string(num_classes) + ")");
      }
      if (k > 0 && e.labels[k] <= e.labels[k - 1]) {
        throw InvalidArgument(where + ": labels must be sorted and distinct");
      }
    }
  }
}

SupervisedDataset SupervisedDataset::Subset(
    std::span<const std::size_t> indices) const {
  SupervisedDataset out;
  out.task = task;
  out.num_classes = num_classes;
  out.feature_dim = feature_dim;
  out.examples.reserve(indices.size());
  for (std::size_t i : indices) out.examples.push_back(examples.at(i));
  return out;
}

void RewardSpec::Validate() const {
  if (!(partial_credit >= 0.0 && partial_credit <= 1.0)) {
    throw InvalidArgument("partial_credit must lie in [0, 1]");
  }
  std::set<int> seen;
  for (const auto& group : groups) {
    for (int c : group) {
      if (c < 0) throw InvalidArgument("negative class index in reward group");
      if (!seen.insert(c).second) {
        throw InvalidArgument("class " + std::to_string(c) +
                              " appears in more than one reward group");
      }
    }
  }
}

RewardSpec RewardSpec::Fashion() {
  return RewardSpec{Task::kMulticlass, {{2, 4}, {0, 6}, {5, 7, 9}}, 0.25};
}

RewardSpec RewardSpec::Covertype() {
  return RewardSpec{Task::kMulticlass, {{0, 5}, {1, 2}, {3, 4}}, 0.25};
}

RewardSpec RewardSpec::Named(std::string_view groups, Task task) {
  RewardSpec spec;
  if (groups == "fashion") {
    spec = Fashion();
  } else if (groups == "covertype") {
    spec = Covertype();
  } else if (groups != "none" && !groups.empty()) {
    throw InvalidArgument("unknown reward groups '" + std::string(groups) + "'");
  }
  if (task == Task::kMultilabel && !spec.groups.empty()) {
    throw InvalidArgument("partial-credit groups apply to multiclass tasks only");
  }
  spec.task = task;
  return spec;
}

double Reward(const RewardSpec& spec, std::span<const int> labels, int action) {
  if (action < 0) throw InvalidArgument("negative action");
  if (std::find(labels.begin(), labels.end(), action) != labels.end()) return 1.0;
  if (spec.task == Task::kMultilabel || labels.empty()) return 0.0;
  const int label = labels.front();
  for (const auto& group : spec.groups) {
    const bool has_label = std::find(group.begin(), group.end(), label) != group.end();
    if (!has_label) continue;
    const bool has_action =
        std::find(group.begin(), group.end(), action) != group.end();
    return has_action ? spec.partial_credit : 0.0;
  }
  return 0.0;
}

}  // namespace bopl
