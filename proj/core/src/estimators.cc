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

#include "bopl/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bopl/error.hpp"
#include "bopl/numeric.hpp"

namespace bopl {
namespace {

void CheckDims(const SoftmaxPolicy& policy, int num_actions, int feature_dim) {
  if (policy.num_actions() != num_actions || policy.feature_dim() != feature_dim) {
    throw DimensionMismatch(
        "policy has " + std::to_string(policy.num_actions()) + " actions and " +
        std::to_string(policy.feature_dim()) + " features, data has " +
        std::to_string(num_actions) + " and " + std::to_string(feature_dim));
  }
}

void CheckCap(std::optional<double> clip_cap) {
  if (clip_cap && !(*clip_cap > 0.0)) {
    throw InvalidArgument("clip cap must be positive");
  }
}

}  // namespace

std::string_view EstimatorName(Estimator estimator) {
  switch (estimator) {
    case Estimator::kIps: return "ips";
    case Estimator::kIpsClipped: return "ips_clipped";
    case Estimator::kSnips: return "snips";
    case Estimator::kDm: return "dm";
    case Estimator::kTruth: return "truth";
  }
  return "unknown";
}

Estimator ParseEstimator(std::string_view name) {
  for (Estimator e : {Estimator::kIps, Estimator::kIpsClipped, Estimator::kSnips,
                      Estimator::kDm, Estimator::kTruth}) {
    if (EstimatorName(e) == name) return e;
  }
  throw InvalidArgument("unknown estimator '" + std::string(name) + "'");
}

std::vector<double> ImportanceWeights(const SoftmaxPolicy& policy,
                                      const BanditDataset& data,
                                      std::optional<double> clip_cap) {
  CheckDims(policy, data.num_actions(), data.feature_dim());
  CheckCap(clip_cap);
  std::vector<double> weights;
  weights.reserve(data.size());
  for (const LoggedExample& e : data) {
    double w = policy.Probability(e.features, e.action) / e.propensity;
    if (clip_cap) w = std::min(w, *clip_cap);
    weights.push_back(w);
  }
  return weights;
}

RiskEstimate IpsRisk(const SoftmaxPolicy& policy, const BanditDataset& data,
                     std::optional<double> clip_cap) {
  if (data.empty()) throw DegenerateData("IPS of an empty log");
  const std::vector<double> weights = ImportanceWeights(policy, data, clip_cap);
  std::vector<double> terms(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    terms[i] = -data[i].reward * weights[i];
  }
  RiskEstimate est;
  est.value = PairwiseSum(terms) / static_cast<double>(data.size());
  est.estimator = clip_cap ? Estimator::kIpsClipped : Estimator::kIps;
  est.clip_cap = clip_cap;
  est.orientation = Orientation::kRisk;
  est.n = data.size();
  return est;
}

RiskEstimate SnipsReward(const SoftmaxPolicy& policy, const BanditDataset& data) {
  const std::vector<double> weights = ImportanceWeights(policy, data);
  std::vector<double> terms(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    terms[i] = data[i].reward * weights[i];
  }
  const double denom = PairwiseSum(weights);
  if (!(denom > 0.0)) {
    throw DegenerateData("SNIPS: every importance weight is zero");
  }
  RiskEstimate est;
  est.value = PairwiseSum(terms) / denom;
  est.estimator = Estimator::kSnips;
  est.orientation = Orientation::kReward;
  est.n = data.size();
  return est;
}

RiskEstimate DmReward(const Ensemble& reward_model, const SoftmaxPolicy& policy,
                      std::span<const std::vector<double>> contexts) {
  if (contexts.empty()) throw DegenerateData("DM over zero contexts");
  CheckDims(policy, reward_model.num_actions(), reward_model.feature_dim());
  std::vector<double> terms(contexts.size());
  std::vector<double> per_action(static_cast<std::size_t>(policy.num_actions()));
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    const ActionDistribution pi = policy.Distribution(contexts[i]);
    const ActionScores g = reward_model.Score(contexts[i]);
    if (policy.is_argmax()) {
      terms[i] = g[static_cast<std::size_t>(
          std::max_element(pi.begin(), pi.end()) - pi.begin())];
      continue;
    }
    for (std::size_t a = 0; a < pi.size(); ++a) per_action[a] = pi[a] * g[a];
    terms[i] = PairwiseSum(per_action);
  }
  RiskEstimate est;
  est.value = PairwiseSum(terms) / static_cast<double>(contexts.size());
  est.estimator = Estimator::kDm;
  est.orientation = Orientation::kReward;
  est.n = contexts.size();
  return est;
}

RiskEstimate GroundTruthReward(const SoftmaxPolicy& policy,
                               const SupervisedDataset& data,
                               const RewardSpec& spec) {
  if (data.examples.empty()) throw DegenerateData("evaluation on zero examples");
  CheckDims(policy, data.num_classes, data.feature_dim);
  std::vector<double> terms(data.size());
  std::vector<double> per_action(static_cast<std::size_t>(policy.num_actions()));
  for (std::size_t i = 0; i < data.size(); ++i) {
    const SupervisedExample& e = data.examples[i];
    if (policy.is_argmax()) {
      terms[i] = Reward(spec, e.labels, policy.SelectAction(e.features, nullptr));
      continue;
    }
    const ActionDistribution pi = policy.Distribution(e.features);
    for (std::size_t a = 0; a < pi.size(); ++a) {
      per_action[a] = pi[a] * Reward(spec, e.labels, static_cast<int>(a));
    }
    terms[i] = PairwiseSum(per_action);
  }
  RiskEstimate est;
  est.value = PairwiseSum(terms) / static_cast<double>(data.size());
  est.estimator = Estimator::kTruth;
  est.orientation = Orientation::kReward;
  est.n = data.size();
  return est;
}

}  // namespace bopl
