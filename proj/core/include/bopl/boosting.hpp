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

// Boosted off-policy learning: functional gradient boosting of a softmax
// ensemble policy on the IPS empirical risk (Algorithm::kBopl) or on the
// composite surrogate objective (Algorithm::kBoplS), plus boosted reward
// regression (Algorithm::kBrr) as a baseline.
//
// Each round fits a base predictor to the reduction of the current
// functional gradient (see base_learners.hpp), rescales it to weighted norm
// omega, and adds it with the weight that minimizes the quadratic upper
// bound of the objective along the predictor:
//   IPS risk:   alpha = 2 g / omega, guaranteed decrease (omega / 4) alpha^2
//   composite:  alpha = g / omega,   guaranteed decrease (omega / 2) alpha^2
// where g is the correlation of the predictor with the negative gradient.

#ifndef BOPL_BOOSTING_HPP_
#define BOPL_BOOSTING_HPP_

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bopl/base_learners.hpp"
#include "bopl/cart.hpp"
#include "bopl/dataset.hpp"
#include "bopl/policy.hpp"

namespace bopl {

enum class Algorithm {
  kBopl,
  kBoplS,
  kBrr,
};

std::string_view AlgorithmName(Algorithm algorithm);
// Accepts "bopl", "bopl_s" / "bopl-s" and "brr".
Algorithm ParseAlgorithm(std::string_view name);

struct BoostConfig {
  Algorithm algorithm = Algorithm::kBopl;
  int rounds = 100;
  // Weighted norm every base predictor is rescaled to.
  double omega = 1.0;
  // Added to every training reward before boosting (so -0.2 subtracts 0.2).
  // Not applied by TrainBrr.
  double reward_translation = 0.0;
  TreeParams tree;
  BaseKind base = BaseKind::kRegression;
  // Multiplies every ensemble weight; in (0, 1].
  double shrinkage = 1.0;
  // Early stop when |g|, max |h| or |alpha| falls below this.
  double stop_threshold = 1e-10;
  // Training propensities are floored at 1 / clip_cap, capping every
  // importance weight of the objective at clip_cap.
  std::optional<double> clip_cap;
  // Rescale every predictor to weighted norm omega. When off, the ensemble
  // weight uses the predictor's own weighted norm.
  bool rescale = true;
  // Rounds without validation improvement before stopping; 0 disables.
  int patience = 0;
  // Keep the per-example xi and rho vectors in every RoundStats.
  bool record_example_stats = false;

  // Throws InvalidArgument on out-of-range values.
  void Validate() const;

  friend bool operator==(const BoostConfig&, const BoostConfig&) = default;
};

enum class StopReason {
  kRoundsExhausted,
  kGradTerm,
  kPredictorMagnitude,
  kAlpha,
  kValidation,
};

std::string_view StopReasonName(StopReason reason);
StopReason ParseStopReason(std::string_view name);

struct RoundStats {
  int round = 0;
  // Ensemble weight as added, shrinkage included.
  double alpha = 0.0;
  // Correlation g of the rescaled predictor with the negative functional
  // gradient. Mean residual for boosted regression.
  double grad_term = 0.0;
  // Norm of the objective's gradient with respect to all training scores
  // before the round. Root mean squared residual for boosted regression.
  double grad_norm = 0.0;
  // IPS risk of the policy after the round on the (translated) training
  // log. Mean squared residual for boosted regression.
  double emp_risk = 0.0;
  // Composite surrogate risk after the round; absent for regression.
  std::optional<double> surrogate_risk;
  // SNIPS reward of the argmax policy on the original training rewards;
  // NaN when it selects no logged action.
  double snips_train = 0.0;
  // Excess-risk bound after the round (IPS objective only, else NaN).
  double bound = 0.0;
  // Weighted norm of the added predictor.
  double omega_effective = 0.0;
  // Weighted error of the classification base learner.
  std::optional<double> error_rate;
  std::optional<double> validation_reward;
  std::vector<double> surrogate_switch;
  std::vector<double> smoothness_switch;

  friend bool operator==(const RoundStats&, const RoundStats&) = default;
};

struct TrainTrace {
  Algorithm algorithm = Algorithm::kBopl;
  double omega = 1.0;
  // Minimum empirical risk and the initial excess risk of the uniform
  // policy, on the training log as optimized.
  double r_star = 0.0;
  double delta0 = 0.0;
  double initial_risk = 0.0;
  double initial_surrogate_risk = 0.0;
  std::vector<RoundStats> rounds;
  StopReason stop_reason = StopReason::kRoundsExhausted;
  // Members kept in the returned ensemble; fewer than rounds.size() after a
  // validation stop.
  int kept_rounds = 0;

  std::vector<double> Alphas() const;

  friend bool operator==(const TrainTrace&, const TrainTrace&) = default;
};

struct TrainResult {
  Ensemble ensemble;
  TrainTrace trace;
};

// Reward of the ensemble after a round on held-out data (higher is better).
using ValidationFn = std::function<double(const Ensemble&)>;

// Every reward becomes r - c.
BanditDataset TranslateRewards(const BanditDataset& data, double c);

// (1/n) sum_i min(0, -r_i / p_i): the risk of a policy that may pick any
// action independently for every logged example.
double MinEmpiricalRisk(const BanditDataset& data);

// IPS risk (1/n) sum_i -(r_i / p_i) pi(a_i | x_i) at beta = 1.
double EmpiricalRisk(const Ensemble& ensemble, const BanditDataset& data);
// Composite risk: the IPS loss for negative rewards, the surrogate
// -(r_i / p_i)(ln pi(a_i | x_i) + 1) otherwise. Never below EmpiricalRisk.
double SurrogateRisk(const Ensemble& ensemble, const BanditDataset& data);

// The same two risks from a row-major n x |A| table of ensemble scores.
double EmpiricalRiskFromScores(const BanditDataset& data,
                               std::span<const double> scores);
double SurrogateRiskFromScores(const BanditDataset& data,
                               std::span<const double> scores);

double BoplEnsembleWeight(double grad_term, double omega, double shrinkage = 1.0);
double BoplsEnsembleWeight(double grad_term, double omega,
                           double shrinkage = 1.0);

// delta0 * exp(-(omega / (4 delta0)) sum_{t <= T} alpha_t^2) for every prefix
// T of `alphas`. All zeros when delta0 is 0.
std::vector<double> ExcessRiskBound(std::span<const double> alphas, double omega,
                                    double delta0);

// Runs BOPL or BOPL-S. Throws DegenerateData on an empty log or when every
// reward is zero. A non-empty `validation` scores the ensemble after every
// round. With config.patience > 0 it also stops training, and the returned
// ensemble is then truncated to its best-scoring prefix.
TrainResult Train(const BanditDataset& data, const BoostConfig& config,
                  const ValidationFn& validation = {});

// Gradient boosting on squared error over the logged (x_i, a_i, r_i) rows
// with unit weights and ensemble weight `shrinkage` per round.
TrainResult TrainBrr(const BanditDataset& data, const BoostConfig& config);

}  // namespace bopl

#endif  // BOPL_BOOSTING_HPP_
