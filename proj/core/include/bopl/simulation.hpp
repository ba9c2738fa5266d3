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

// Supervised-to-bandit conversion: a multinomial logistic logging policy
// with uniform exploration, seeded splits, and the per-trial experiment
// layout used by the command-line tool.

#ifndef BOPL_SIMULATION_HPP_
#define BOPL_SIMULATION_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bopl/dataset.hpp"
#include "bopl/supervised.hpp"

namespace bopl {

// Softmax over linear scores W [x; 1], mixed with the uniform distribution:
// q(a|x) = (1 - epsilon) softmax(W [x; 1])_a + epsilon / |A|.
class LoggingPolicy {
 public:
  // `weights` is row-major num_actions x (feature_dim + 1), bias last.
  LoggingPolicy(int num_actions, int feature_dim, std::vector<double> weights,
                double epsilon);

  // All-zero weights: the uniform policy.
  static LoggingPolicy Uniform(int num_actions, int feature_dim,
                               double epsilon = 0.0);

  std::vector<double> Scores(std::span<const double> features) const;
  // The mixed probabilities q(.|x).
  std::vector<double> Probabilities(std::span<const double> features) const;

  int num_actions() const { return num_actions_; }
  int feature_dim() const { return feature_dim_; }
  double epsilon() const { return epsilon_; }
  const std::vector<double>& weights() const { return weights_; }

  friend bool operator==(const LoggingPolicy&, const LoggingPolicy&) = default;

 private:
  int num_actions_;
  int feature_dim_;
  std::vector<double> weights_;
  double epsilon_;
};

struct LoggingTrainConfig {
  double l2_strength = 1.0;
  int max_epochs = 1000;
  double epsilon = 0.05;
  // Picks the target label of multilabel examples.
  std::uint64_t seed = 0;
};

// Mean cross-entropy plus (l2 / 2) ||W||^2 and its gradient with respect to
// the row-major weights, for one target class per example.
double LoggingObjective(std::span<const SupervisedExample> examples,
                        std::span<const int> targets, int num_actions,
                        std::span<const double> weights, double l2_strength,
                        std::vector<double>* gradient);

// L2-regularized multinomial logistic regression by full-batch gradient
// descent with step 1 / (0.5 max ||[x; 1]||^2 + l2), stopping when the
// relative improvement of the objective drops below 1e-6 or after
// max_epochs. Multilabel examples train on one uniformly drawn true label;
// examples without labels are skipped. Throws DegenerateData when nothing
// is left to train on.
LoggingPolicy TrainLoggingPolicy(const SupervisedDataset& subset,
                                 const LoggingTrainConfig& config);

// Samples one action per example from the logging policy and records its
// exact mixed probability and the reward `spec` assigns.
BanditDataset Convert(const SupervisedDataset& data, const LoggingPolicy& logging,
                      const RewardSpec& spec, std::uint64_t seed);

// Expected reward of the (stochastic) logging policy on `data`.
double LoggingPolicyReward(const LoggingPolicy& logging,
                           const SupervisedDataset& data, const RewardSpec& spec);

// Shuffles 0..n-1 with `seed` and cuts it into contiguous parts whose sizes
// follow `fractions` (nonnegative, summing to 1 within 1e-9). Part
// boundaries are round(n * cumulative fraction).
std::vector<std::vector<std::size_t>> SplitIndices(
    std::size_t n, std::span<const double> fractions, std::uint64_t seed);

std::vector<SupervisedDataset> SplitDataset(const SupervisedDataset& data,
                                            std::span<const double> fractions,
                                            std::uint64_t seed);

struct TrialConfig {
  double test_frac = 0.2;
  double validation_frac = 0.2;  // of the non-test part
  double logging_frac = 0.1;     // of the training part
  LoggingTrainConfig logging;
};

// Everything one replicate experiment needs.
struct Trial {
  std::uint64_t seed = 0;
  // Row indices of every part in the source dataset.
  std::vector<std::size_t> logging_indices;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> validation_indices;
  std::vector<std::size_t> test_indices;
  SupervisedDataset logging_subset;
  SupervisedDataset train;       // the part converted into the bandit log
  SupervisedDataset validation;
  SupervisedDataset test;
  LoggingPolicy logging_policy = LoggingPolicy::Uniform(1, 0);
  BanditDataset log = BanditDataset(1, 0);
};

// Splits off test and validation parts, trains the logging policy on
// `logging_frac` of the remaining training part and converts the rest.
// Every random choice derives from DeriveSeed(master_seed, trial).
Trial MakeTrial(const SupervisedDataset& data, const RewardSpec& spec,
                const TrialConfig& config, std::uint64_t master_seed,
                std::uint64_t trial);

}  // namespace bopl

#endif  // BOPL_SIMULATION_HPP_
