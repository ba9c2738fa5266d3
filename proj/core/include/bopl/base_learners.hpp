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

// Reductions of the per-round boosting objective to weighted regression and
// weighted binary classification over the expanded rows [x_i; e_a].
//
// Row i * |A| + a of every expanded array belongs to example i and action a.
// `probs` arguments hold the current policy's probabilities in the same
// row-major n x |A| layout.

#ifndef BOPL_BASE_LEARNERS_HPP_
#define BOPL_BASE_LEARNERS_HPP_

#include <span>
#include <string_view>
#include <vector>

#include "bopl/cart.hpp"
#include "bopl/dataset.hpp"
#include "bopl/policy.hpp"

namespace bopl {

// Which empirical objective a round optimizes: the IPS risk itself, or the
// composite that swaps in the log-surrogate for nonnegative rewards.
enum class Objective {
  kBopl,
  kBoplS,
};

enum class BaseKind {
  kRegression,
  kClassification,
};

std::string_view BaseKindName(BaseKind kind);
// Accepts "regression"/"regr" and "classification"/"class".
BaseKind ParseBaseKind(std::string_view name);

// xi_i: pi(a_i | x_i) for the IPS objective and for negative rewards under
// the composite objective, 1 otherwise.
double SurrogateSwitch(Objective objective, double reward, double logged_prob);
// rho_i: 1/2 for negative rewards under the composite objective, 1 otherwise.
double SmoothnessSwitch(Objective objective, double reward);

// Weighted least-squares rows: weight |r_i| rho_i / p_i and target
// sgn(r_i) (xi_i / rho_i) (1{a = a_i} - pi(a | x_i)).
void ComputeRegressionTargets(const BanditDataset& data,
                              std::span<const double> probs, Objective objective,
                              std::span<double> weights,
                              std::span<double> targets);

// Weighted classification rows: weight |(r_i xi_i / p_i)(1{a = a_i} -
// pi(a | x_i))| and label sgn(r_i)(2 * 1{a = a_i} - 1). Zero-reward rows get
// label +1 and weight 0.
void ComputeClassificationTargets(const BanditDataset& data,
                                  std::span<const double> probs,
                                  Objective objective, std::span<double> weights,
                                  std::span<int> labels);

// The same reductions as sample lists, with the current policy evaluated at
// beta = 1.
std::vector<WeightedRegressionSample> RegressionTargets(
    const BanditDataset& data, const SoftmaxPolicy& current,
    Objective objective = Objective::kBopl);
std::vector<WeightedClassificationSample> ClassificationTargets(
    const BanditDataset& data, const SoftmaxPolicy& current,
    Objective objective = Objective::kBopl);

// omega' = (1/n) sum_i (|r_i| rho_i / p_i) sum_a h(x_i, a)^2, from predictor
// outputs laid out like `probs`.
double WeightedNorm(const BanditDataset& data, std::span<const double> outputs,
                    Objective objective);
double WeightedNorm(const Predictor& predictor, const BanditDataset& data,
                    Objective objective);

// The predictor scaled by sqrt(omega / omega') so that its weighted norm is
// omega. Throws DegenerateData when omega' is zero.
Predictor RescaleToOmega(const Predictor& predictor, const BanditDataset& data,
                         double omega, Objective objective);

// Normalized weight of the rows where sign(output) differs from the label.
// Throws DegenerateData when the total weight is zero.
double WeightedErrorRate(std::span<const double> outputs,
                         std::span<const double> weights,
                         std::span<const int> labels);
double WeightedErrorRate(const Predictor& predictor,
                         std::span<const WeightedClassificationSample> samples);

// Row-major n x |A| softmax probabilities (beta = 1) of `scores`.
std::vector<double> RowSoftmax(std::span<const double> scores,
                               std::size_t num_actions);

}  // namespace bopl

#endif  // BOPL_BASE_LEARNERS_HPP_
