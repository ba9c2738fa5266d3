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

#include "bopl/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "bopl/error.hpp"
#include "bopl/numeric.hpp"
#include "bopl/policy.hpp"
#include "bopl/random.hpp"

namespace bopl {
namespace {

double LinearScore(std::span<const double> w, std::span<const double> x) {
  double s = w[x.size()];
  for (std::size_t j = 0; j < x.size(); ++j) s += w[j] * x[j];
  return s;
}

}  // namespace

LoggingPolicy::LoggingPolicy(int num_actions, int feature_dim,
                             std::vector<double> weights, double epsilon)
    : num_actions_(num_actions),
      feature_dim_(feature_dim),
      weights_(std::move(weights)),
      epsilon_(epsilon) {
  if (num_actions_ < 1) throw InvalidArgument("logging policy needs >= 1 action");
  if (feature_dim_ < 0) throw InvalidArgument("negative feature dimension");
  const auto expected = static_cast<std::size_t>(num_actions_) *
                        static_cast<std::size_t>(feature_dim_ + 1);
  if (weights_.size() != expected) {
    throw DimensionMismatch("logging weights have " +
                            std::to_string(weights_.size()) + " entries, expected " +
                            std::to_string(expected));
  }
  for (double w : weights_) {
    if (!std::isfinite(w)) throw InvalidArgument("non-finite logging weight");
  }
  if (!(epsilon_ >= 0.0 && epsilon_ <= 1.0)) {
    throw InvalidArgument("epsilon must lie in [0, 1]");
  }
}

LoggingPolicy LoggingPolicy::Uniform(int num_actions, int feature_dim,
                                     double epsilon) {
  const auto size = static_cast<std::size_t>(std::max(num_actions, 0)) *
                    static_cast<std::size_t>(std::max(feature_dim + 1, 0));
  return LoggingPolicy(num_actions, feature_dim, std::vector<double>(size, 0.0),
                       epsilon);
}

std::vector<double> LoggingPolicy::Scores(std::span<const double> features) const {
  if (static_cast<int>(features.size()) != feature_dim_) {
    throw DimensionMismatch("context size differs from the logging policy's");
  }
  const auto stride = static_cast<std::size_t>(feature_dim_ + 1);
  std::vector<double> scores(static_cast<std::size_t>(num_actions_));
  for (std::size_t a = 0; a < scores.size(); ++a) {
    scores[a] = LinearScore(std::span(weights_).subspan(a * stride, stride), features);
  }
  return scores;
}

std::vector<double> LoggingPolicy::Probabilities(
    std::span<const double> features) const {
  std::vector<double> q = Softmax(Scores(features));
  const double uniform = epsilon_ / static_cast<double>(num_actions_);
  for (double& p : q) p = (1.0 - epsilon_) * p + uniform;
  return q;
}

double LoggingObjective(std::span<const SupervisedExample> examples,
                        std::span<const int> targets, int num_actions,
                        std::span<const double> weights, double l2_strength,
                        std::vector<double>* gradient) {
  if (examples.empty()) throw DegenerateData("logging objective of no examples");
  if (targets.size() != examples.size()) {
    throw DimensionMismatch("one target per example required");
  }
  const std::size_t d = examples[0].features.size();
  const std::size_t stride = d + 1;
  const auto k = static_cast<std::size_t>(num_actions);
  if (weights.size() != k * stride) throw DimensionMismatch("weight table size");
  const double inv_m = 1.0 / static_cast<double>(examples.size());
  if (gradient != nullptr) gradient->assign(weights.size(), 0.0);

  std::vector<double> losses(examples.size());
  std::vector<double> scores(k);
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const std::vector<double>& x = examples[i].features;
    for (std::size_t a = 0; a < k; ++a) {
      scores[a] = LinearScore(weights.subspan(a * stride, stride), x);
    }
    const auto y = static_cast<std::size_t>(targets[i]);
    losses[i] = -LogSoftmaxAt(scores, y);
    if (gradient == nullptr) continue;
    const std::vector<double> pi = Softmax(scores);
    for (std::size_t a = 0; a < k; ++a) {
      const double c = (pi[a] - (a == y ? 1.0 : 0.0)) * inv_m;
      double* g = gradient->data() + a * stride;
      for (std::size_t j = 0; j < d; ++j) g[j] += c * x[j];
      g[d] += c;
    }
  }
  double sq = 0.0;
  for (double w : weights) sq += w * w;
  if (gradient != nullptr) {
    for (std::size_t r = 0; r < weights.size(); ++r) {
      (*gradient)[r] += l2_strength * weights[r];
    }
  }
  return PairwiseSum(losses) * inv_m + 0.5 * l2_strength * sq;
}

LoggingPolicy TrainLoggingPolicy(const SupervisedDataset& subset,
                                 const LoggingTrainConfig& config) {
  subset.Validate();
  if (!(config.l2_strength > 0.0)) {
    throw InvalidArgument("l2_strength must be positive");
  }
  if (config.max_epochs < 0) throw InvalidArgument("max_epochs must be >= 0");

  Rng rng(config.seed);
  std::vector<SupervisedExample> examples;
  std::vector<int> targets;
  for (const SupervisedExample& e : subset.examples) {
    if (e.labels.empty()) continue;
    const std::size_t pick =
        e.labels.size() == 1 ? 0 : static_cast<std::size_t>(rng.UniformInt(e.labels.size()));
    examples.push_back(e);
    targets.push_back(e.labels[pick]);
  }
  if (examples.empty()) {
    throw DegenerateData("logging policy training set has no labeled examples");
  }

  const auto stride = static_cast<std::size_t>(subset.feature_dim + 1);
  std::vector<double> weights(static_cast<std::size_t>(subset.num_classes) * stride,
                              0.0);
  double max_sq = 0.0;
  for (const SupervisedExample& e : examples) {
    double sq = 1.0;
    for (double x : e.features) sq += x * x;
    max_sq = std::max(max_sq, sq);
  }
  const double step = 1.0 / (0.5 * max_sq + config.l2_strength);

  std::vector<double> gradient;
  double objective = LoggingObjective(examples, targets, subset.num_classes,
                                      weights, config.l2_strength, &gradient);
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    for (std::size_t r = 0; r < weights.size(); ++r) weights[r] -= step * gradient[r];
    const double next = LoggingObjective(examples, targets, subset.num_classes,
                                         weights, config.l2_strength, &gradient);
    const double improvement = (objective - next) / std::max(std::abs(objective), 1e-300);
    objective = next;
    if (improvement < 1e-6) break;
  }
  return LoggingPolicy(subset.num_classes, subset.feature_dim, std::move(weights),
                       config.epsilon);
}

BanditDataset Convert(const SupervisedDataset& data, const LoggingPolicy& logging,
                      const RewardSpec& spec, std::uint64_t seed) {
  if (logging.num_actions() != data.num_classes ||
      logging.feature_dim() != data.feature_dim) {
    throw DimensionMismatch("logging policy does not match the supervised data");
  }
  Rng rng(seed);
  std::vector<LoggedExample> logged;
  logged.reserve(data.size());
  for (const SupervisedExample& e : data.examples) {
    const std::vector<double> q = logging.Probabilities(e.features);
    const auto action = static_cast<int>(rng.Categorical(q));
    const double p = q[static_cast<std::size_t>(action)];
    if (!(p > 0.0)) throw DegenerateData("sampled an action with zero propensity");
    logged.push_back({e.features, action, p, Reward(spec, e.labels, action)});
  }
  return BanditDataset(data.num_classes, data.feature_dim, std::move(logged));
}

double LoggingPolicyReward(const LoggingPolicy& logging,
                           const SupervisedDataset& data, const RewardSpec& spec) {
  if (data.examples.empty()) throw DegenerateData("evaluation on zero examples");
  std::vector<double> terms(data.size());
  std::vector<double> per_action(static_cast<std::size_t>(logging.num_actions()));
  for (std::size_t i = 0; i < data.size(); ++i) {
    const SupervisedExample& e = data.examples[i];
    const std::vector<double> q = logging.Probabilities(e.features);
    for (std::size_t a = 0; a < q.size(); ++a) {
      per_action[a] = q[a] * Reward(spec, e.labels, static_cast<int>(a));
    }
    terms[i] = PairwiseSum(per_action);
  }
  return PairwiseSum(terms) / static_cast<double>(data.size());
}

std::vector<std::vector<std::size_t>> SplitIndices(
    std::size_t n, std::span<const double> fractions, std::uint64_t seed) {
  if (fractions.empty()) throw InvalidArgument("no split fractions");
  double total = 0.0;
  for (double f : fractions) {
    if (!(f >= 0.0) || !std::isfinite(f)) {
      throw InvalidArgument("split fractions must be finite and nonnegative");
    }
    total += f;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidArgument("split fractions must sum to 1");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.Shuffle(std::span<std::size_t>(order));

  std::vector<std::vector<std::size_t>> parts;
  double cumulative = 0.0;
  std::size_t begin = 0;
  for (std::size_t p = 0; p < fractions.size(); ++p) {
    cumulative += fractions[p];
    std::size_t end = p + 1 == fractions.size()
                          ? n
                          : static_cast<std::size_t>(
                                std::llround(cumulative * static_cast<double>(n)));
    end = std::clamp(end, begin, n);
    parts.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(begin),
                       order.begin() + static_cast<std::ptrdiff_t>(end));
    begin = end;
  }
  return parts;
}

std::vector<SupervisedDataset> SplitDataset(const SupervisedDataset& data,
                                            std::span<const double> fractions,
                                            std::uint64_t seed) {
  std::vector<SupervisedDataset> out;
  for (const auto& part : SplitIndices(data.size(), fractions, seed)) {
    out.push_back(data.Subset(part));
  }
  return out;
}

Trial MakeTrial(const SupervisedDataset& data, const RewardSpec& spec,
                const TrialConfig& config, std::uint64_t master_seed,
                std::uint64_t trial) {
  data.Validate();
  spec.Validate();
  for (double f : {config.test_frac, config.validation_frac, config.logging_frac}) {
    if (!(f >= 0.0 && f < 1.0)) {
      throw InvalidArgument("trial split fractions must lie in [0, 1)");
    }
  }
  Trial out;
  out.seed = DeriveSeed(master_seed, trial);
  // Splits `pool` (indices into `data`) and maps the parts back.
  auto split = [&](const std::vector<std::size_t>& pool, double first,
                   std::uint64_t stream) {
    const double fractions[] = {first, 1.0 - first};
    auto parts = SplitIndices(pool.size(), fractions, DeriveSeed(out.seed, stream));
    for (auto& part : parts) {
      for (std::size_t& i : part) i = pool[i];
    }
    return parts;
  };
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  auto outer = split(all, 1.0 - config.test_frac, 0);
  out.test_indices = std::move(outer[1]);
  auto inner = split(outer[0], 1.0 - config.validation_frac, 1);
  out.validation_indices = std::move(inner[1]);
  auto train = split(inner[0], config.logging_frac, 2);
  out.logging_indices = std::move(train[0]);
  out.train_indices = std::move(train[1]);
  out.test = data.Subset(out.test_indices);
  out.validation = data.Subset(out.validation_indices);
  out.logging_subset = data.Subset(out.logging_indices);
  out.train = data.Subset(out.train_indices);

  LoggingTrainConfig lc = config.logging;
  lc.seed = DeriveSeed(out.seed, 3);
  out.logging_policy = TrainLoggingPolicy(out.logging_subset, lc);
  out.log = Convert(out.train, out.logging_policy, spec, DeriveSeed(out.seed, 4));
  return out;
}

}  // namespace bopl
