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

#include "bopl/base_learners.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bopl/error.hpp"
#include "bopl/numeric.hpp"

namespace bopl {
namespace {

double Sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void CheckLayout(const BanditDataset& data, std::size_t size, const char* what) {
  const std::size_t expected =
      data.size() * static_cast<std::size_t>(data.num_actions());
  if (size != expected) {
    throw DimensionMismatch(std::string(what) + " has " + std::to_string(size) +
                            " entries, expected " + std::to_string(expected));
  }
}

std::vector<double> PolicyProbs(const BanditDataset& data,
                                const SoftmaxPolicy& policy) {
  std::vector<double> probs;
  probs.reserve(data.size() * static_cast<std::size_t>(data.num_actions()));
  for (const LoggedExample& e : data) {
    const ActionDistribution pi = Softmax(policy.ensemble().Score(e.features));
    probs.insert(probs.end(), pi.begin(), pi.end());
  }
  return probs;
}

std::vector<double> PredictorOutputs(const Predictor& predictor,
                                     const BanditDataset& data) {
  const auto k = static_cast<std::size_t>(data.num_actions());
  std::vector<double> out(data.size() * k);
  for (std::size_t i = 0; i < data.size(); ++i) {
    predictor.Score(data[i].features, std::span<double>(out.data() + i * k, k));
  }
  return out;
}

}  // namespace

std::string_view BaseKindName(BaseKind kind) {
  return kind == BaseKind::kRegression ? "regression" : "classification";
}

BaseKind ParseBaseKind(std::string_view name) {
  if (name == "regression" || name == "regr") return BaseKind::kRegression;
  if (name == "classification" || name == "class") return BaseKind::kClassification;
  throw InvalidArgument("unknown base learner '" + std::string(name) + "'");
}

double SurrogateSwitch(Objective objective, double reward, double logged_prob) {
  if (objective == Objective::kBoplS && reward >= 0.0) return 1.0;
  return logged_prob;
}

double SmoothnessSwitch(Objective objective, double reward) {
  return objective == Objective::kBoplS && reward < 0.0 ? 0.5 : 1.0;
}

void ComputeRegressionTargets(const BanditDataset& data,
                              std::span<const double> probs, Objective objective,
                              std::span<double> weights,
                              std::span<double> targets) {
  CheckLayout(data, probs.size(), "probability table");
  CheckLayout(data, weights.size(), "weight buffer");
  CheckLayout(data, targets.size(), "target buffer");
  const auto k = static_cast<std::size_t>(data.num_actions());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const LoggedExample& e = data[i];
    const auto a_i = static_cast<std::size_t>(e.action);
    const double* pi = probs.data() + i * k;
    const double xi = SurrogateSwitch(objective, e.reward, pi[a_i]);
    const double rho = SmoothnessSwitch(objective, e.reward);
    const double w = std::abs(e.reward) * rho / e.propensity;
    const double coef = Sign(e.reward) * (xi / rho);
    for (std::size_t a = 0; a < k; ++a) {
      weights[i * k + a] = w;
      targets[i * k + a] = coef * ((a == a_i ? 1.0 : 0.0) - pi[a]);
    }
  }
}

void ComputeClassificationTargets(const BanditDataset& data,
                                  std::span<const double> probs,
                                  Objective objective, std::span<double> weights,
                                  std::span<int> labels) {
  CheckLayout(data, probs.size(), "probability table");
  CheckLayout(data, weights.size(), "weight buffer");
  CheckLayout(data, labels.size(), "label buffer");
  const auto k = static_cast<std::size_t>(data.num_actions());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const LoggedExample& e = data[i];
    const auto a_i = static_cast<std::size_t>(e.action);
    const double* pi = probs.data() + i * k;
    const double xi = SurrogateSwitch(objective, e.reward, pi[a_i]);
    const double coef = e.reward * xi / e.propensity;
    const int sign = e.reward < 0.0 ? -1 : 1;
    for (std::size_t a = 0; a < k; ++a) {
      const bool logged = a == a_i;
      weights[i * k + a] = std::abs(coef * ((logged ? 1.0 : 0.0) - pi[a]));
      labels[i * k + a] = logged ? sign : -sign;
    }
  }
}

std::vector<WeightedRegressionSample> RegressionTargets(
    const BanditDataset& data, const SoftmaxPolicy& current, Objective objective) {
  const std::vector<double> probs = PolicyProbs(data, current);
  std::vector<double> weights(probs.size());
  std::vector<double> targets(probs.size());
  ComputeRegressionTargets(data, probs, objective, weights, targets);
  const auto k = static_cast<std::size_t>(data.num_actions());
  std::vector<WeightedRegressionSample> samples(probs.size());
  for (std::size_t r = 0; r < samples.size(); ++r) {
    const LoggedExample& e = data[r / k];
    samples[r].features = e.features;
    samples[r].features.resize(e.features.size() + k, 0.0);
    samples[r].features[e.features.size() + r % k] = 1.0;
    samples[r].weight = weights[r];
    samples[r].target = targets[r];
  }
  return samples;
}

std::vector<WeightedClassificationSample> ClassificationTargets(
    const BanditDataset& data, const SoftmaxPolicy& current, Objective objective) {
  const std::vector<double> probs = PolicyProbs(data, current);
  std::vector<double> weights(probs.size());
  std::vector<int> labels(probs.size());
  ComputeClassificationTargets(data, probs, objective, weights, labels);
  const auto k = static_cast<std::size_t>(data.num_actions());
  std::vector<WeightedClassificationSample> samples(probs.size());
  for (std::size_t r = 0; r < samples.size(); ++r) {
    const LoggedExample& e = data[r / k];
    samples[r].features = e.features;
    samples[r].features.resize(e.features.size() + k, 0.0);
    samples[r].features[e.features.size() + r % k] = 1.0;
    samples[r].weight = weights[r];
    samples[r].label = labels[r];
  }
  return samples;
}

double WeightedNorm(const BanditDataset& data, std::span<const double> outputs,
                    Objective objective) {
  CheckLayout(data, outputs.size(), "predictor output table");
  if (data.empty()) throw DegenerateData("weighted norm over an empty log");
  const auto k = static_cast<std::size_t>(data.num_actions());
  std::vector<double> terms(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const LoggedExample& e = data[i];
    double sq = 0.0;
    for (std::size_t a = 0; a < k; ++a) sq += outputs[i * k + a] * outputs[i * k + a];
    terms[i] = std::abs(e.reward) * SmoothnessSwitch(objective, e.reward) /
               e.propensity * sq;
  }
  return PairwiseSum(terms) / static_cast<double>(data.size());
}

double WeightedNorm(const Predictor& predictor, const BanditDataset& data,
                    Objective objective) {
  return WeightedNorm(data, PredictorOutputs(predictor, data), objective);
}

Predictor RescaleToOmega(const Predictor& predictor, const BanditDataset& data,
                         double omega, Objective objective) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw InvalidArgument("omega must be positive and finite");
  }
  const double norm = WeightedNorm(predictor, data, objective);
  if (!(norm > 0.0)) {
    throw DegenerateData("predictor vanishes on every weighted context");
  }
  return predictor.Rescaled(std::sqrt(omega / norm));
}

double WeightedErrorRate(std::span<const double> outputs,
                         std::span<const double> weights,
                         std::span<const int> labels) {
  if (outputs.size() != weights.size() || outputs.size() != labels.size()) {
    throw DimensionMismatch("outputs, weights and labels differ in length");
  }
  std::vector<double> wrong(outputs.size());
  for (std::size_t r = 0; r < outputs.size(); ++r) {
    wrong[r] = labels[r] * outputs[r] > 0.0 ? 0.0 : weights[r];
  }
  const double total = PairwiseSum(weights);
  if (!(total > 0.0)) throw DegenerateData("total sample weight is zero");
  return PairwiseSum(wrong) / total;
}

double WeightedErrorRate(const Predictor& predictor,
                         std::span<const WeightedClassificationSample> samples) {
  std::vector<double> outputs(samples.size());
  std::vector<double> weights(samples.size());
  std::vector<int> labels(samples.size());
  for (std::size_t r = 0; r < samples.size(); ++r) {
    outputs[r] = predictor.scale() * predictor.tree().Evaluate(samples[r].features);
    weights[r] = samples[r].weight;
    labels[r] = samples[r].label;
  }
  return WeightedErrorRate(outputs, weights, labels);
}

std::vector<double> RowSoftmax(std::span<const double> scores,
                               std::size_t num_actions) {
  if (num_actions == 0 || scores.size() % num_actions != 0) {
    throw DimensionMismatch("score table is not a multiple of the action count");
  }
  std::vector<double> probs(scores.size());
  for (std::size_t r = 0; r < scores.size(); r += num_actions) {
    const ActionDistribution pi = Softmax(scores.subspan(r, num_actions));
    std::copy(pi.begin(), pi.end(), probs.begin() + static_cast<std::ptrdiff_t>(r));
  }
  return probs;
}

}  // namespace bopl
