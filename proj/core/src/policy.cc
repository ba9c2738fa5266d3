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

#include "bopl/policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "bopl/error.hpp"
#include "bopl/random.hpp"

namespace bopl {
namespace {

void CheckLossInputs(std::span<const double> scores, int action,
                     double propensity) {
  if (action < 0 || static_cast<std::size_t>(action) >= scores.size()) {
    throw InvalidArgument("action " + std::to_string(action) +
                          " outside the score vector");
  }
  if (!(propensity > 0.0)) {
    throw InvalidArgument("propensity must be positive, got " +
                          std::to_string(propensity));
  }
}

void CheckBeta(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw InvalidArgument("softmax needs a finite inverse temperature >= 0");
  }
}

}  // namespace

// --- Predictor ---------------------------------------------------------------

Predictor::Predictor(PredictorKind kind, Tree tree, double scale)
    : kind_(kind), tree_(std::move(tree)), scale_(scale) {
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
    throw InvalidArgument("predictor scale must be positive and finite");
  }
  if (kind_ == PredictorKind::kClassificationTree) {
    for (const TreeNode& node : tree_.nodes()) {
      if (node.is_leaf() && node.value != 1.0 && node.value != -1.0) {
        throw InvalidArgument("classification tree leaves must be +1 or -1");
      }
    }
  }
}

Predictor Predictor::Constant(double value) {
  return Predictor(PredictorKind::kRegressionTree, Tree::Constant(value));
}

void Predictor::Score(std::span<const double> context,
                      std::span<double> out) const {
  for (std::size_t a = 0; a < out.size(); ++a) {
    out[a] = scale_ * tree_.EvaluateAugmented(context, a);
  }
}

double Predictor::Score(std::span<const double> context,
                        std::size_t action) const {
  return scale_ * tree_.EvaluateAugmented(context, action);
}

Predictor Predictor::Rescaled(double factor) const {
  return Predictor(kind_, tree_, scale_ * factor);
}

// --- Ensemble ----------------------------------------------------------------

Ensemble::Ensemble(int num_actions, int feature_dim)
    : num_actions_(num_actions), feature_dim_(feature_dim) {
  if (num_actions_ < 1) throw InvalidArgument("ensemble needs >= 1 action");
  if (feature_dim_ < 0) throw InvalidArgument("negative feature dimension");
}

void Ensemble::Add(double alpha, Predictor predictor) {
  if (!std::isfinite(alpha)) throw InvalidArgument("non-finite ensemble weight");
  members_.push_back({alpha, std::move(predictor)});
}

ActionScores Ensemble::Score(std::span<const double> context) const {
  ActionScores scores(static_cast<std::size_t>(num_actions_));
  ScoreInto(context, scores);
  return scores;
}

void Ensemble::ScoreInto(std::span<const double> context,
                         std::span<double> out) const {
  if (static_cast<int>(context.size()) != feature_dim_) {
    throw DimensionMismatch("context has " + std::to_string(context.size()) +
                            " features, ensemble expects " +
                            std::to_string(feature_dim_));
  }
  if (static_cast<int>(out.size()) != num_actions_) {
    throw DimensionMismatch("score buffer size differs from action count");
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (const EnsembleMember& m : members_) {
    for (std::size_t a = 0; a < out.size(); ++a) {
      out[a] += m.alpha * m.predictor.Score(context, a);
    }
  }
}

Ensemble Ensemble::Prefix(std::size_t count) const {
  Ensemble out(num_actions_, feature_dim_);
  count = std::min(count, members_.size());
  out.members_.assign(members_.begin(), members_.begin() + count);
  return out;
}

Ensemble Ensemble::WithScaledWeights(double factor) const {
  Ensemble out = *this;
  for (EnsembleMember& m : out.members_) m.alpha *= factor;
  return out;
}

// --- SoftmaxPolicy -----------------------------------------------------------

SoftmaxPolicy::SoftmaxPolicy(Ensemble ensemble, double beta)
    : ensemble_(std::move(ensemble)), beta_(beta) {
  if (!(beta_ >= 0.0)) throw InvalidArgument("inverse temperature must be >= 0");
}

ActionDistribution SoftmaxPolicy::Distribution(
    std::span<const double> context) const {
  return PolicyDistribution(ensemble_.Score(context), beta_);
}

double SoftmaxPolicy::Probability(std::span<const double> context,
                                  int action) const {
  if (action < 0 || action >= num_actions()) {
    throw InvalidArgument("action out of range");
  }
  return Distribution(context)[static_cast<std::size_t>(action)];
}

int SoftmaxPolicy::SelectAction(std::span<const double> context,
                                Rng* rng) const {
  const ActionScores scores = ensemble_.Score(context);
  if (is_argmax()) return ArgmaxAction(scores);
  if (rng == nullptr) {
    throw InvalidArgument("stochastic action selection needs a generator");
  }
  return static_cast<int>(rng->Categorical(Softmax(scores, beta_)));
}

// --- Free functions ----------------------------------------------------------

ActionDistribution Softmax(std::span<const double> scores, double beta) {
  CheckBeta(beta);
  if (scores.empty()) throw InvalidArgument("softmax of an empty score vector");
  ActionDistribution probs(scores.size());
  double max_z = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < scores.size(); ++a) {
    if (!std::isfinite(scores[a])) {
      throw InvalidArgument("softmax requires finite scores");
    }
    probs[a] = beta * scores[a];
    max_z = std::max(max_z, probs[a]);
  }
  double total = 0.0;
  for (double& p : probs) {
    p = std::exp(p - max_z);
    total += p;
  }
  for (double& p : probs) p /= total;
  return probs;
}

double LogSoftmaxAt(std::span<const double> scores, std::size_t action,
                    double beta) {
  CheckBeta(beta);
  if (action >= scores.size()) throw InvalidArgument("action out of range");
  double max_z = -std::numeric_limits<double>::infinity();
  for (double s : scores) max_z = std::max(max_z, beta * s);
  double total = 0.0;
  for (double s : scores) total += std::exp(beta * s - max_z);
  return beta * scores[action] - max_z - std::log(total);
}

int ArgmaxAction(std::span<const double> scores) {
  if (scores.empty()) throw InvalidArgument("argmax of an empty score vector");
  std::size_t best = 0;
  for (std::size_t a = 1; a < scores.size(); ++a) {
    if (scores[a] > scores[best]) best = a;
  }
  return static_cast<int>(best);
}

ActionDistribution PolicyDistribution(std::span<const double> scores,
                                      double beta) {
  if (beta == kArgmaxBeta) {
    ActionDistribution one_hot(scores.size(), 0.0);
    one_hot[static_cast<std::size_t>(ArgmaxAction(scores))] = 1.0;
    return one_hot;
  }
  return Softmax(scores, beta);
}

double LossAt(std::span<const double> scores, int action, double propensity,
              double reward) {
  CheckLossInputs(scores, action, propensity);
  const ActionDistribution pi = Softmax(scores);
  return -(reward / propensity) * pi[static_cast<std::size_t>(action)];
}

std::vector<double> LossGradientAt(std::span<const double> scores, int action,
                                   double propensity, double reward) {
  CheckLossInputs(scores, action, propensity);
  ActionDistribution pi = Softmax(scores);
  const auto a_i = static_cast<std::size_t>(action);
  const double coef = -(reward / propensity) * pi[a_i];
  std::vector<double> grad(pi.size());
  for (std::size_t a = 0; a < pi.size(); ++a) {
    grad[a] = coef * ((a == a_i ? 1.0 : 0.0) - pi[a]);
  }
  return grad;
}

double SurrogateLossAt(std::span<const double> scores, int action,
                       double propensity, double reward) {
  CheckLossInputs(scores, action, propensity);
  const double log_pi = LogSoftmaxAt(scores, static_cast<std::size_t>(action));
  return -(reward / propensity) * (log_pi + 1.0);
}

std::vector<double> SurrogateLossGradientAt(std::span<const double> scores,
                                            int action, double propensity,
                                            double reward) {
  CheckLossInputs(scores, action, propensity);
  ActionDistribution pi = Softmax(scores);
  const auto a_i = static_cast<std::size_t>(action);
  const double coef = -(reward / propensity);
  std::vector<double> grad(pi.size());
  for (std::size_t a = 0; a < pi.size(); ++a) {
    grad[a] = coef * ((a == a_i ? 1.0 : 0.0) - pi[a]);
  }
  return grad;
}

double Loss(const LoggedExample& example, const Ensemble& ensemble) {
  return LossAt(ensemble.Score(example.features), example.action,
                example.propensity, example.reward);
}

std::vector<double> LossGradient(const LoggedExample& example,
                                 const Ensemble& ensemble) {
  return LossGradientAt(ensemble.Score(example.features), example.action,
                        example.propensity, example.reward);
}

double SurrogateLoss(const LoggedExample& example, const Ensemble& ensemble) {
  return SurrogateLossAt(ensemble.Score(example.features), example.action,
                         example.propensity, example.reward);
}

std::vector<double> SurrogateLossGradient(const LoggedExample& example,
                                          const Ensemble& ensemble) {
  return SurrogateLossGradientAt(ensemble.Score(example.features),
                                 example.action, example.propensity,
                                 example.reward);
}

}  // namespace bopl
