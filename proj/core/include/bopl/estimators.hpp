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

// Off-policy estimators of a target policy's risk or reward from logged
// bandit data, and full-information evaluation on supervised data.
//
// All sums use PairwiseSum, so every estimate is independent of how the
// per-example terms were scheduled.

#ifndef BOPL_ESTIMATORS_HPP_
#define BOPL_ESTIMATORS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bopl/dataset.hpp"
#include "bopl/policy.hpp"
#include "bopl/supervised.hpp"

namespace bopl {

enum class Estimator {
  kIps,
  kIpsClipped,
  kSnips,
  kDm,
  kTruth,
};

std::string_view EstimatorName(Estimator estimator);
// Accepts "ips", "ips_clipped", "snips", "dm" and "truth".
Estimator ParseEstimator(std::string_view name);

// Whether `value` estimates a risk (lower is better) or a reward.
enum class Orientation {
  kRisk,
  kReward,
};

struct RiskEstimate {
  double value = 0.0;
  Estimator estimator = Estimator::kIps;
  // Present iff estimator == kIpsClipped.
  std::optional<double> clip_cap;
  Orientation orientation = Orientation::kRisk;
  // Number of examples or contexts the estimate averages over.
  std::size_t n = 0;

  // The estimate expressed as a reward (negated when it is a risk).
  double reward() const {
    return orientation == Orientation::kReward ? value : -value;
  }
};

// Importance weights pi(a_i | x_i) / p_i, optionally truncated at
// `clip_cap`.
std::vector<double> ImportanceWeights(const SoftmaxPolicy& policy,
                                      const BanditDataset& data,
                                      std::optional<double> clip_cap = {});

// IPS risk (1/n) sum_i -r_i w_i. With a cap the weights become
// min(w_i, cap). Throws DegenerateData on an empty log.
RiskEstimate IpsRisk(const SoftmaxPolicy& policy, const BanditDataset& data,
                     std::optional<double> clip_cap = {});

// Self-normalized IPS reward sum_i r_i w_i / sum_i w_i. Throws
// DegenerateData when every weight is zero.
RiskEstimate SnipsReward(const SoftmaxPolicy& policy, const BanditDataset& data);

// Direct-method reward (1/m) sum_x sum_a pi(a|x) g(x, a), where g is the
// reward model's score. Argmax policies use the selected action only.
RiskEstimate DmReward(const Ensemble& reward_model, const SoftmaxPolicy& policy,
                      std::span<const std::vector<double>> contexts);

// Mean reward over supervised examples. Argmax policies are scored on the
// selected action; stochastic policies by their expected reward.
RiskEstimate GroundTruthReward(const SoftmaxPolicy& policy,
                               const SupervisedDataset& data,
                               const RewardSpec& spec);

}  // namespace bopl

#endif  // BOPL_ESTIMATORS_HPP_
