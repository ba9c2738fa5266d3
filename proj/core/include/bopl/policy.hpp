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

// Softmax ensemble policies: tree predictors scoring (context, action)
// pairs, weighted sums of predictors, their softmax policies, and the
// per-example IPS loss and surrogate loss together with their gradients
// with respect to the score vector.

#ifndef BOPL_POLICY_HPP_
#define BOPL_POLICY_HPP_

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "bopl/dataset.hpp"
#include "bopl/tree.hpp"

namespace bopl {

class Rng;

// Scores f(x, a) of every action for one context.
using ActionScores = std::vector<double>;

// Conditional action probabilities for one context; sums to one.
using ActionDistribution = std::vector<double>;

// Inverse temperature denoting deterministic argmax selection.
inline constexpr double kArgmaxBeta = std::numeric_limits<double>::infinity();

enum class PredictorKind {
  kRegressionTree,
  // Leaves are exactly +1 or -1 before scaling.
  kClassificationTree,
};

// A tree over action-augmented rows [x; one_hot(a)] times a positive scale.
class Predictor {
 public:
  Predictor(PredictorKind kind, Tree tree, double scale = 1.0);

  // Regression tree returning `value` for every (context, action).
  static Predictor Constant(double value);

  // out[a] = scale * tree([x; e_a]) for every action a < out.size().
  void Score(std::span<const double> context, std::span<double> out) const;
  double Score(std::span<const double> context, std::size_t action) const;

  // Same predictor with scale multiplied by `factor` (> 0).
  Predictor Rescaled(double factor) const;

  PredictorKind kind() const { return kind_; }
  const Tree& tree() const { return tree_; }
  double scale() const { return scale_; }

  friend bool operator==(const Predictor&, const Predictor&) = default;

 private:
  PredictorKind kind_;
  Tree tree_;
  double scale_;
};

struct EnsembleMember {
  double alpha = 0.0;
  Predictor predictor;

  friend bool operator==(const EnsembleMember&, const EnsembleMember&) = default;
};

// f(x, a) = sum_t alpha_t h_t(x, a). The empty ensemble scores every
// action 0.
class Ensemble {
 public:
  Ensemble(int num_actions, int feature_dim);

  // Appends a member; alpha must be finite.
  void Add(double alpha, Predictor predictor);

  ActionScores Score(std::span<const double> context) const;
  // Writes the scores into `out` (size num_actions).
  void ScoreInto(std::span<const double> context, std::span<double> out) const;

  // The first `count` members.
  Ensemble Prefix(std::size_t count) const;
  // Every weight multiplied by `factor`.
  Ensemble WithScaledWeights(double factor) const;

  int num_actions() const { return num_actions_; }
  int feature_dim() const { return feature_dim_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<EnsembleMember>& members() const { return members_; }

  friend bool operator==(const Ensemble&, const Ensemble&) = default;

 private:
  int num_actions_;
  int feature_dim_;
  std::vector<EnsembleMember> members_;
};

// pi(a | x) = exp(beta f(x, a)) / sum_a' exp(beta f(x, a')). With
// beta = kArgmaxBeta the policy is deterministic and picks the
// highest-scoring action, lowest index first among ties.
class SoftmaxPolicy {
 public:
  explicit SoftmaxPolicy(Ensemble ensemble, double beta = 1.0);

  static SoftmaxPolicy Argmax(Ensemble ensemble) {
    return SoftmaxPolicy(std::move(ensemble), kArgmaxBeta);
  }

  bool is_argmax() const { return beta_ == kArgmaxBeta; }
  double beta() const { return beta_; }
  const Ensemble& ensemble() const { return ensemble_; }
  int num_actions() const { return ensemble_.num_actions(); }
  int feature_dim() const { return ensemble_.feature_dim(); }

  ActionDistribution Distribution(std::span<const double> context) const;
  double Probability(std::span<const double> context, int action) const;

  // Argmax mode ignores `rng` (may be null). Stochastic mode samples from
  // the softmax and throws InvalidArgument when `rng` is null.
  int SelectAction(std::span<const double> context, Rng* rng) const;

 private:
  Ensemble ensemble_;
  double beta_;
};

// Softmax of beta * scores with max-subtraction. Requires finite scores and
// finite beta >= 0.
ActionDistribution Softmax(std::span<const double> scores, double beta = 1.0);

// ln softmax(beta * scores)[action], computed without forming the
// probability so that it stays finite for very negative log-probabilities.
double LogSoftmaxAt(std::span<const double> scores, std::size_t action,
                    double beta = 1.0);

// Index of the largest score; ties go to the lowest index.
int ArgmaxAction(std::span<const double> scores);

// Distribution of a policy with inverse temperature `beta` given scores:
// softmax for finite beta, a one-hot vector for kArgmaxBeta.
ActionDistribution PolicyDistribution(std::span<const double> scores, double beta);

// The IPS loss -(r/p) pi(a | x) of one example (beta = 1) and its gradient
// with respect to the score vector, -(r/p) pi(a|x) (e_a - pi(x)).
double Loss(const LoggedExample& example, const Ensemble& ensemble);
std::vector<double> LossGradient(const LoggedExample& example,
                                 const Ensemble& ensemble);

// The surrogate loss -(r/p)(ln pi(a | x) + 1) and its gradient
// -(r/p)(e_a - pi(x)).
double SurrogateLoss(const LoggedExample& example, const Ensemble& ensemble);
std::vector<double> SurrogateLossGradient(const LoggedExample& example,
                                          const Ensemble& ensemble);

// The same four quantities evaluated at a given score vector. These are
// what the training loop calls on its cached ensemble scores.
double LossAt(std::span<const double> scores, int action, double propensity,
              double reward);
std::vector<double> LossGradientAt(std::span<const double> scores, int action,
                                   double propensity, double reward);
double SurrogateLossAt(std::span<const double> scores, int action,
                       double propensity, double reward);
std::vector<double> SurrogateLossGradientAt(std::span<const double> scores,
                                            int action, double propensity,
                                            double reward);

}  // namespace bopl

#endif  // BOPL_POLICY_HPP_
