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

#include "bopl/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "bopl/error.hpp"
#include "bopl/numeric.hpp"

namespace bopl {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double RiskFromProbs(const BanditDataset& data, std::span<const double> probs) {
  const auto k = static_cast<std::size_t>(data.num_actions());
  std::vector<double> terms(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const LoggedExample& e = data[i];
    terms[i] = -(e.reward / e.propensity) *
               probs[i * k + static_cast<std::size_t>(e.action)];
  }
  return PairwiseSum(terms) / static_cast<double>(data.size());
}

double SurrogateFromScores(const BanditDataset& data,
                           std::span<const double> scores,
                           std::span<const double> probs) {
  const auto k = static_cast<std::size_t>(data.num_actions());
  std::vector<double> terms(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const LoggedExample& e = data[i];
    const auto a = static_cast<std::size_t>(e.action);
    if (e.reward < 0.0) {
      terms[i] = -(e.reward / e.propensity) * probs[i * k + a];
    } else {
      const double log_pi = LogSoftmaxAt(scores.subspan(i * k, k), a);
      terms[i] = -(e.reward / e.propensity) * (log_pi + 1.0);
    }
  }
  return PairwiseSum(terms) / static_cast<double>(data.size());
}

std::vector<double> EnsembleScores(const Ensemble& ensemble,
                                   const BanditDataset& data) {
  const auto k = static_cast<std::size_t>(data.num_actions());
  std::vector<double> scores(data.size() * k);
  for (std::size_t i = 0; i < data.size(); ++i) {
    ensemble.ScoreInto(data[i].features, std::span<double>(scores.data() + i * k, k));
  }
  return scores;
}

void CheckCompatible(const Ensemble& ensemble, const BanditDataset& data) {
  if (ensemble.num_actions() != data.num_actions() ||
      ensemble.feature_dim() != data.feature_dim()) {
    throw DimensionMismatch("ensemble and log disagree in actions or features");
  }
  if (data.empty()) throw DegenerateData("risk of an empty log");
}

// SNIPS reward of the argmax policy with the given scores; NaN when no
// logged action is selected.
double ArgmaxSnips(const BanditDataset& original, std::span<const double> scores) {
  const auto k = static_cast<std::size_t>(original.num_actions());
  std::vector<double> num(original.size());
  std::vector<double> den(original.size());
  for (std::size_t i = 0; i < original.size(); ++i) {
    const LoggedExample& e = original[i];
    const bool hit = ArgmaxAction(scores.subspan(i * k, k)) == e.action;
    den[i] = hit ? 1.0 / e.propensity : 0.0;
    num[i] = hit ? e.reward / e.propensity : 0.0;
  }
  const double d = PairwiseSum(den);
  return d > 0.0 ? PairwiseSum(num) / d : kNaN;
}

class ValidationTracker {
 public:
  ValidationTracker(const ValidationFn& fn, int patience)
      : fn_(fn ? &fn : nullptr), patience_(patience) {
  }

  bool active() const { return fn_ != nullptr; }

  // Scores the ensemble after `round`; true when patience is exhausted.
  // Patience 0 only records the rewards.
  bool Observe(const Ensemble& ensemble, int round, RoundStats& stats) {
    if (!active()) return false;
    const double v = (*fn_)(ensemble);
    stats.validation_reward = v;
    if (best_round_ < 0 || v > best_) {
      best_ = v;
      best_round_ = round;
      bad_ = 0;
      return false;
    }
    return ++bad_ >= patience_ && patience_ > 0;
  }

  int best_round() const { return best_round_; }

 private:
  const ValidationFn* fn_;
  int patience_;
  double best_ = 0.0;
  int best_round_ = -1;
  int bad_ = 0;
};

}  // namespace

std::string_view AlgorithmName(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kBopl: return "bopl";
    case Algorithm::kBoplS: return "bopl_s";
    case Algorithm::kBrr: return "brr";
  }
  return "unknown";
}

Algorithm ParseAlgorithm(std::string_view name) {
  if (name == "bopl") return Algorithm::kBopl;
  if (name == "bopl_s" || name == "bopl-s") return Algorithm::kBoplS;
  if (name == "brr") return Algorithm::kBrr;
  throw InvalidArgument("unknown algorithm '" + std::string(name) + "'");
}

std::string_view StopReasonName(StopReason reason) {
  switch (reason) {
    case StopReason::kRoundsExhausted: return "rounds_exhausted";
    case StopReason::kGradTerm: return "grad_term";
    case StopReason::kPredictorMagnitude: return "predictor_magnitude";
    case StopReason::kAlpha: return "alpha";
    case StopReason::kValidation: return "validation";
  }
  return "unknown";
}

StopReason ParseStopReason(std::string_view name) {
  for (StopReason r : {StopReason::kRoundsExhausted, StopReason::kGradTerm,
                       StopReason::kPredictorMagnitude, StopReason::kAlpha,
                       StopReason::kValidation}) {
    if (StopReasonName(r) == name) return r;
  }
  throw InvalidArgument("unknown stop reason '" + std::string(name) + "'");
}

void BoostConfig::Validate() const {
  if (rounds < 1) throw InvalidArgument("rounds must be at least 1");
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw InvalidArgument("omega must be positive and finite");
  }
  if (!std::isfinite(reward_translation)) {
    throw InvalidArgument("reward_translation must be finite");
  }
  if (!(shrinkage > 0.0 && shrinkage <= 1.0)) {
    throw InvalidArgument("shrinkage must lie in (0, 1]");
  }
  if (!(stop_threshold >= 0.0)) {
    throw InvalidArgument("stop_threshold must be nonnegative");
  }
  if (clip_cap && !(*clip_cap > 0.0)) {
    throw InvalidArgument("clip_cap must be positive");
  }
  if (patience < 0) throw InvalidArgument("patience must be nonnegative");
  tree.Validate();
}

std::vector<double> TrainTrace::Alphas() const {
  std::vector<double> alphas;
  alphas.reserve(rounds.size());
  for (const RoundStats& r : rounds) alphas.push_back(r.alpha);
  return alphas;
}

BanditDataset TranslateRewards(const BanditDataset& data, double c) {
  std::vector<LoggedExample> examples(data.begin(), data.end());
  for (LoggedExample& e : examples) e.reward -= c;
  return BanditDataset(data.num_actions(), data.feature_dim(), std::move(examples));
}

double MinEmpiricalRisk(const BanditDataset& data) {
  if (data.empty()) throw DegenerateData("minimum risk of an empty log");
  std::vector<double> terms(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    terms[i] = std::min(0.0, -data[i].reward / data[i].propensity);
  }
  return PairwiseSum(terms) / static_cast<double>(data.size());
}

double EmpiricalRisk(const Ensemble& ensemble, const BanditDataset& data) {
  CheckCompatible(ensemble, data);
  const std::vector<double> scores = EnsembleScores(ensemble, data);
  return RiskFromProbs(
      data, RowSoftmax(scores, static_cast<std::size_t>(data.num_actions())));
}

double SurrogateRisk(const Ensemble& ensemble, const BanditDataset& data) {
  CheckCompatible(ensemble, data);
  const std::vector<double> scores = EnsembleScores(ensemble, data);
  return SurrogateFromScores(
      data, scores,
      RowSoftmax(scores, static_cast<std::size_t>(data.num_actions())));
}

double EmpiricalRiskFromScores(const BanditDataset& data,
                               std::span<const double> scores) {
  if (data.empty()) throw DegenerateData("risk of an empty log");
  const auto k = static_cast<std::size_t>(data.num_actions());
  if (scores.size() != data.size() * k) {
    throw DimensionMismatch("score table does not match the log");
  }
  return RiskFromProbs(data, RowSoftmax(scores, k));
}

double SurrogateRiskFromScores(const BanditDataset& data,
                               std::span<const double> scores) {
  if (data.empty()) throw DegenerateData("risk of an empty log");
  const auto k = static_cast<std::size_t>(data.num_actions());
  if (scores.size() != data.size() * k) {
    throw DimensionMismatch("score table does not match the log");
  }
  return SurrogateFromScores(data, scores, RowSoftmax(scores, k));
}

double BoplEnsembleWeight(double grad_term, double omega, double shrinkage) {
  return shrinkage * (2.0 / omega) * grad_term;
}

double BoplsEnsembleWeight(double grad_term, double omega, double shrinkage) {
  return shrinkage * grad_term / omega;
}

std::vector<double> ExcessRiskBound(std::span<const double> alphas, double omega,
                                    double delta0) {
  std::vector<double> bound(alphas.size(), 0.0);
  if (!(delta0 > 0.0)) return bound;
  double sum_sq = 0.0;
  for (std::size_t t = 0; t < alphas.size(); ++t) {
    sum_sq += alphas[t] * alphas[t];
    bound[t] = delta0 * std::exp(-(omega / (4.0 * delta0)) * sum_sq);
  }
  return bound;
}

TrainResult Train(const BanditDataset& data, const BoostConfig& config,
                  const ValidationFn& validation) {
  config.Validate();
  if (config.algorithm == Algorithm::kBrr) {
    throw InvalidArgument("use TrainBrr for boosted reward regression");
  }
  if (data.empty()) throw DegenerateData("cannot train on an empty log");

  BanditDataset train = TranslateRewards(data, -config.reward_translation);
  if (config.clip_cap) {
    const double floor = std::min(1.0, 1.0 / *config.clip_cap);
    std::vector<LoggedExample> examples(train.begin(), train.end());
    for (LoggedExample& e : examples) e.propensity = std::max(e.propensity, floor);
    train = BanditDataset(train.num_actions(), train.feature_dim(),
                          std::move(examples));
  }
  if (std::all_of(train.begin(), train.end(),
                  [](const LoggedExample& e) { return e.reward == 0.0; })) {
    throw DegenerateData("every training reward is zero");
  }

  const bool ips = config.algorithm == Algorithm::kBopl;
  const Objective objective = ips ? Objective::kBopl : Objective::kBoplS;
  const bool classify = config.base == BaseKind::kClassification;
  const std::size_t n = train.size();
  const auto k = static_cast<std::size_t>(train.num_actions());
  const double inv_n = 1.0 / static_cast<double>(n);
  const FeatureMatrix matrix = FeatureMatrix::ExpandedActions(train);

  std::vector<double> scores(n * k, 0.0);
  std::vector<double> probs = RowSoftmax(scores, k);
  std::vector<double> weights(n * k);
  std::vector<double> targets(classify ? 0 : n * k);
  std::vector<int> labels(classify ? n * k : 0);
  std::vector<double> outputs(n * k);
  std::vector<double> terms(n);

  TrainResult result{Ensemble(train.num_actions(), train.feature_dim()), {}};
  TrainTrace& trace = result.trace;
  trace.algorithm = config.algorithm;
  trace.omega = config.omega;
  trace.r_star = MinEmpiricalRisk(train);
  trace.initial_risk = RiskFromProbs(train, probs);
  trace.initial_surrogate_risk = SurrogateFromScores(train, scores, probs);
  trace.delta0 = std::max(0.0, trace.initial_risk - trace.r_star);
  trace.stop_reason = StopReason::kRoundsExhausted;

  ValidationTracker tracker(validation, config.patience);
  double sum_alpha_sq = 0.0;

  for (int t = 1; t <= config.rounds; ++t) {
    RoundStats stats;
    stats.round = t;

    // Per-example coefficient r_i xi_i / p_i of the negative gradient
    // (e_{a_i} - pi(x_i)); also yields the gradient norm.
    std::vector<double> coef(n);
    if (config.record_example_stats) {
      stats.surrogate_switch.resize(n);
      stats.smoothness_switch.resize(n);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const LoggedExample& e = train[i];
      const double pi_logged = probs[i * k + static_cast<std::size_t>(e.action)];
      const double xi = SurrogateSwitch(objective, e.reward, pi_logged);
      coef[i] = e.reward * xi / e.propensity;
      double sq = 0.0;
      for (std::size_t a = 0; a < k; ++a) {
        const double d = (a == static_cast<std::size_t>(e.action) ? 1.0 : 0.0) -
                         probs[i * k + a];
        sq += d * d;
      }
      terms[i] = coef[i] * coef[i] * sq;
      if (config.record_example_stats) {
        stats.surrogate_switch[i] = xi;
        stats.smoothness_switch[i] = SmoothnessSwitch(objective, e.reward);
      }
    }
    stats.grad_norm = std::sqrt(PairwiseSum(terms)) * inv_n;

    Tree tree;
    if (classify) {
      ComputeClassificationTargets(train, probs, objective, weights, labels);
    } else {
      ComputeRegressionTargets(train, probs, objective, weights, targets);
    }
    const bool any_weight =
        std::any_of(weights.begin(), weights.end(), [](double w) { return w > 0.0; });
    if (!any_weight) {
      trace.stop_reason = StopReason::kGradTerm;
      break;
    }
    tree = classify ? FitClassificationTree(matrix, weights, labels, config.tree)
                    : FitRegressionTree(matrix, weights, targets, config.tree);
    for (std::size_t r = 0; r < n * k; ++r) outputs[r] = matrix.Evaluate(tree, r);
    if (classify) stats.error_rate = WeightedErrorRate(outputs, weights, labels);

    double scale = 1.0;
    const double raw_norm = WeightedNorm(train, outputs, objective);
    if (config.rescale && raw_norm > 0.0) scale = std::sqrt(config.omega / raw_norm);
    const Predictor predictor(classify ? PredictorKind::kClassificationTree
                                       : PredictorKind::kRegressionTree,
                              std::move(tree), scale);
    double max_abs = 0.0;
    for (double& h : outputs) {
      h *= scale;
      max_abs = std::max(max_abs, std::abs(h));
    }
    const double norm = WeightedNorm(train, outputs, objective);
    stats.omega_effective = norm;

    for (std::size_t i = 0; i < n; ++i) {
      double dot = 0.0;
      for (std::size_t a = 0; a < k; ++a) {
        const double d = (a == static_cast<std::size_t>(train[i].action) ? 1.0 : 0.0) -
                         probs[i * k + a];
        dot += d * outputs[i * k + a];
      }
      terms[i] = coef[i] * dot;
    }
    const double g = PairwiseSum(terms) * inv_n;
    stats.grad_term = g;

    double alpha = 0.0;
    if (norm > 0.0) {
      alpha = ips ? BoplEnsembleWeight(g, norm, config.shrinkage)
                  : BoplsEnsembleWeight(g, norm, config.shrinkage);
    }
    if (std::abs(g) < config.stop_threshold) {
      trace.stop_reason = StopReason::kGradTerm;
      break;
    }
    if (max_abs < config.stop_threshold) {
      trace.stop_reason = StopReason::kPredictorMagnitude;
      break;
    }
    if (std::abs(alpha) < config.stop_threshold) {
      trace.stop_reason = StopReason::kAlpha;
      break;
    }

    result.ensemble.Add(alpha, predictor);
    for (std::size_t r = 0; r < n * k; ++r) scores[r] += alpha * outputs[r];
    probs = RowSoftmax(scores, k);

    stats.alpha = alpha;
    stats.emp_risk = RiskFromProbs(train, probs);
    stats.surrogate_risk = SurrogateFromScores(train, scores, probs);
    stats.snips_train = ArgmaxSnips(data, scores);
    sum_alpha_sq += alpha * alpha;
    stats.bound = ips && trace.delta0 > 0.0
                      ? trace.delta0 * std::exp(-(config.omega / (4.0 * trace.delta0)) *
                                                sum_alpha_sq)
                      : (ips ? 0.0 : kNaN);
    const bool exhausted = tracker.Observe(result.ensemble, t, stats);
    trace.rounds.push_back(std::move(stats));
    if (exhausted) {
      trace.stop_reason = StopReason::kValidation;
      break;
    }
  }

  trace.kept_rounds = static_cast<int>(trace.rounds.size());
  if (tracker.active() && tracker.best_round() >= 0 &&
      trace.stop_reason == StopReason::kValidation) {
    trace.kept_rounds = tracker.best_round();
    result.ensemble =
        result.ensemble.Prefix(static_cast<std::size_t>(trace.kept_rounds));
  }
  return result;
}

TrainResult TrainBrr(const BanditDataset& data, const BoostConfig& config) {
  config.Validate();
  if (data.empty()) throw DegenerateData("cannot train on an empty log");
  const std::size_t n = data.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  const FeatureMatrix matrix = FeatureMatrix::LoggedActions(data);
  const std::vector<double> ones(n, 1.0);
  std::vector<double> fitted(n, 0.0);
  std::vector<double> residual(n);
  std::vector<double> squares(n);

  TrainResult result{Ensemble(data.num_actions(), data.feature_dim()), {}};
  TrainTrace& trace = result.trace;
  trace.algorithm = Algorithm::kBrr;
  trace.omega = config.omega;
  trace.r_star = kNaN;
  trace.delta0 = kNaN;
  trace.initial_surrogate_risk = kNaN;
  for (std::size_t i = 0; i < n; ++i) squares[i] = data[i].reward * data[i].reward;
  trace.initial_risk = PairwiseSum(squares) * inv_n;

  for (int t = 1; t <= config.rounds; ++t) {
    RoundStats stats;
    stats.round = t;
    for (std::size_t i = 0; i < n; ++i) {
      residual[i] = data[i].reward - fitted[i];
      squares[i] = residual[i] * residual[i];
    }
    stats.grad_term = PairwiseSum(residual) * inv_n;
    stats.grad_norm = std::sqrt(PairwiseSum(squares) * inv_n);

    Tree tree = FitRegressionTree(matrix, ones, residual, config.tree);
    double max_abs = 0.0;
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = matrix.Evaluate(tree, i);
      max_abs = std::max(max_abs, std::abs(h[i]));
    }
    if (max_abs < config.stop_threshold) {
      trace.stop_reason = StopReason::kPredictorMagnitude;
      break;
    }
    const double alpha = config.shrinkage;
    result.ensemble.Add(alpha, Predictor(PredictorKind::kRegressionTree,
                                         std::move(tree)));
    for (std::size_t i = 0; i < n; ++i) {
      fitted[i] += alpha * h[i];
      const double res = data[i].reward - fitted[i];
      squares[i] = res * res;
    }
    stats.alpha = alpha;
    stats.emp_risk = PairwiseSum(squares) * inv_n;
    stats.snips_train = kNaN;
    stats.bound = kNaN;
    stats.omega_effective = kNaN;
    trace.rounds.push_back(std::move(stats));
  }
  trace.kept_rounds = static_cast<int>(trace.rounds.size());
  return result;
}

}  // namespace bopl
