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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "bopl/error.hpp"
#include "bopl/random.hpp"
#include "support/synthetic.hpp"

namespace bopl {
namespace {

using testing::RandomEnsemble;
using testing::Stump;
using testing::UniformIn;
using testing::UniformVector;

LoggedExample Example(std::vector<double> x, int a, double p, double r) {
  return LoggedExample{std::move(x), a, p, r};
}

// Extended-precision softmax used as an independent reference.
std::vector<long double> ReferenceSoftmax(const std::vector<double>& s) {
  std::vector<long double> e(s.size());
  long double total = 0;
  for (std::size_t a = 0; a < s.size(); ++a) {
    e[a] = std::exp(static_cast<long double>(s[a]));
    total += e[a];
  }
  for (long double& v : e) v /= total;
  return e;
}

TEST(EnsembleTest, EmptyEnsembleScoresZero) {
  const Ensemble ensemble(4, 3);
  EXPECT_EQ(ensemble.Score(std::vector<double>{0.3, -1.0, 2.0}),
            (ActionScores{0, 0, 0, 0}));
}

TEST(EnsembleTest, ConstantMemberScalesByWeight) {
  Ensemble ensemble(3, 1);
  ensemble.Add(2.0, Predictor::Constant(1.0));
  EXPECT_EQ(ensemble.Score(std::vector<double>{5.0}), (ActionScores{2, 2, 2}));
}

TEST(EnsembleTest, TwoStumpsMatchDirectSummation) {
  // Augmented row for 2 actions and 1 feature: [x, e0, e1].
  Ensemble ensemble(2, 1);
  ensemble.Add(0.5, Predictor(PredictorKind::kRegressionTree, Stump(0, 0.0, -1.0, 3.0)));
  ensemble.Add(-2.0, Predictor(PredictorKind::kRegressionTree, Stump(2, 0.5, 0.25, 1.5)));
  const std::vector<double> x{0.7};
  // Action 0: 0.5 * 3 + (-2) * 0.25; action 1: 0.5 * 3 + (-2) * 1.5.
  const ActionScores s = ensemble.Score(x);
  EXPECT_DOUBLE_EQ(s[0], 1.0);
  EXPECT_DOUBLE_EQ(s[1], -1.5);
}

TEST(EnsembleTest, RejectsWrongContextSize) {
  const Ensemble ensemble(2, 3);
  EXPECT_THROW(ensemble.Score(std::vector<double>{1.0}), DimensionMismatch);
}

TEST(EnsembleTest, RejectsNonFiniteWeight) {
  Ensemble ensemble(2, 1);
  EXPECT_THROW(ensemble.Add(std::nan(""), Predictor::Constant(1.0)), InvalidArgument);
}

TEST(PredictorTest, ClassificationLeavesMustBeSigns) {
  EXPECT_THROW(Predictor(PredictorKind::kClassificationTree, Stump(0, 0.0, 1.0, 0.5)),
               InvalidArgument);
  EXPECT_NO_THROW(
      Predictor(PredictorKind::kClassificationTree, Stump(0, 0.0, 1.0, -1.0)));
  EXPECT_THROW(Predictor(PredictorKind::kRegressionTree, Tree(), 0.0), InvalidArgument);
}

TEST(SoftmaxTest, UniformScores) {
  const ActionDistribution p = Softmax(std::vector<double>{0, 0, 0});
  for (double v : p) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);
}

TEST(SoftmaxTest, LogTwo) {
  const ActionDistribution p = Softmax(std::vector<double>{std::log(2.0), 0.0});
  EXPECT_NEAR(p[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(p[1], 1.0 / 3.0, 1e-15);
}

TEST(SoftmaxTest, MatchesExtendedPrecision) {
  const std::vector<double> s{1, 2, 3};
  const ActionDistribution p = Softmax(s);
  const std::vector<long double> ref = ReferenceSoftmax(s);
  for (std::size_t a = 0; a < s.size(); ++a) {
    EXPECT_NEAR(p[a], static_cast<double>(ref[a]), 1e-15);
  }
}

TEST(SoftmaxTest, LargeScoresDoNotOverflow) {
  const ActionDistribution p = Softmax(std::vector<double>{1000, 999});
  EXPECT_NEAR(p[0], 1.0 / (1.0 + std::exp(-1.0)), 1e-15);
}

TEST(SoftmaxTest, OutputsLieInSimplex) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + rng.UniformInt(8);
    const ActionDistribution p =
        Softmax(UniformVector(rng, k, -30, 30), UniformIn(rng, 0.0, 3.0));
    double total = 0.0;
    for (double v : p) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
      total += v;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(SoftmaxTest, TemperatureFoldsIntoScores) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> s = UniformVector(rng, 4, -5, 5);
    const double beta = UniformIn(rng, 0.0, 3.0);
    std::vector<double> scaled(s);
    for (double& v : scaled) v *= beta;
    EXPECT_EQ(Softmax(s, beta), Softmax(scaled, 1.0));
  }
}

TEST(SoftmaxTest, RejectsNonFiniteInputs) {
  EXPECT_THROW(Softmax(std::vector<double>{0.0, std::nan("")}), InvalidArgument);
  EXPECT_THROW(Softmax(std::vector<double>{0.0}, -1.0), InvalidArgument);
  EXPECT_THROW(Softmax(std::vector<double>{}), InvalidArgument);
}

TEST(LogSoftmaxTest, MatchesLogOfSoftmax) {
  const std::vector<double> s{0.3, -1.2, 2.5};
  const ActionDistribution p = Softmax(s);
  for (std::size_t a = 0; a < s.size(); ++a) {
    EXPECT_NEAR(LogSoftmaxAt(s, a), std::log(p[a]), 1e-14);
  }
  // Stays finite where the probability underflows.
  EXPECT_NEAR(LogSoftmaxAt(std::vector<double>{0.0, 800.0}, 0), -800.0, 1e-9);
}

TEST(SelectActionTest, ArgmaxBreaksTiesLow) {
  EXPECT_EQ(ArgmaxAction(std::vector<double>{0, 5, 5}), 1);
  EXPECT_EQ(ArgmaxAction(std::vector<double>{3, 1}), 0);
}

TEST(SelectActionTest, ArgmaxPolicyNeedsNoGenerator) {
  Ensemble ensemble(3, 1);
  ensemble.Add(1.0, Predictor(PredictorKind::kRegressionTree, Stump(3, 0.5, 0.0, 1.0)));
  const SoftmaxPolicy policy = SoftmaxPolicy::Argmax(ensemble);
  EXPECT_EQ(policy.SelectAction(std::vector<double>{0.0}, nullptr), 2);
  EXPECT_EQ(policy.Distribution(std::vector<double>{0.0}), (ActionDistribution{0, 0, 1}));
}

TEST(SelectActionTest, StochasticNeedsGenerator) {
  const SoftmaxPolicy policy(Ensemble(2, 1));
  EXPECT_THROW(policy.SelectAction(std::vector<double>{0.0}, nullptr), InvalidArgument);
}

TEST(SelectActionTest, SamplingFrequencyWithinThreeSigma) {
  const SoftmaxPolicy policy(Ensemble(2, 1));
  Rng rng(2024);
  const int draws = 100000;
  int ones = 0;
  for (int i = 0; i < draws; ++i) {
    ones += policy.SelectAction(std::vector<double>{0.0}, &rng);
  }
  const double sigma = std::sqrt(0.25 / draws);
  EXPECT_LT(std::abs(static_cast<double>(ones) / draws - 0.5), 3 * sigma);

  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(policy.SelectAction(std::vector<double>{0.0}, &a),
              policy.SelectAction(std::vector<double>{0.0}, &b));
  }
}

TEST(SelectActionTest, ArgmaxInvariantToPositiveRescaling) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const Ensemble ensemble = RandomEnsemble(rng, 4, 3, 5);
    const double c = UniformIn(rng, 0.01, 100.0);
    const SoftmaxPolicy p = SoftmaxPolicy::Argmax(ensemble);
    const SoftmaxPolicy q = SoftmaxPolicy::Argmax(ensemble.WithScaledWeights(c));
    for (int i = 0; i < 20; ++i) {
      const std::vector<double> x = UniformVector(rng, 3, -1.5, 1.5);
      EXPECT_EQ(p.SelectAction(x, nullptr), q.SelectAction(x, nullptr));
    }
  }
}

TEST(LossTest, HandValues) {
  const Ensemble empty(2, 1);
  EXPECT_EQ(Loss(Example({0.0}, 0, 0.5, 0.0), empty), 0.0);
  EXPECT_DOUBLE_EQ(Loss(Example({0.0}, 0, 0.5, 1.0), empty), -1.0);
  const std::vector<double> grad = LossGradient(Example({0.0}, 0, 0.5, 1.0), empty);
  EXPECT_DOUBLE_EQ(grad[0], -0.5);
  EXPECT_DOUBLE_EQ(grad[1], 0.5);
  EXPECT_EQ(LossGradient(Example({0.0}, 1, 0.5, 0.0), empty), (std::vector<double>{0, 0}));
}

TEST(LossTest, ComposesScoreAndSoftmax) {
  Rng rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const Ensemble ensemble = RandomEnsemble(rng, 3, 2, 4);
    const LoggedExample e = Example(UniformVector(rng, 2, -1, 1),
                                    static_cast<int>(rng.UniformInt(3)),
                                    UniformIn(rng, 0.05, 1), UniformIn(rng, -1, 1));
    const ActionDistribution pi = Softmax(ensemble.Score(e.features));
    EXPECT_DOUBLE_EQ(Loss(e, ensemble),
                     -(e.reward / e.propensity) * pi[static_cast<std::size_t>(e.action)]);
  }
}

TEST(SurrogateLossTest, HandValues) {
  const Ensemble empty(2, 1);
  EXPECT_EQ(SurrogateLoss(Example({0.0}, 0, 0.5, 0.0), empty), 0.0);
  const long double expected = -2.0L * (std::log(0.5L) + 1.0L);
  EXPECT_NEAR(SurrogateLoss(Example({0.0}, 0, 0.5, 1.0), empty),
              static_cast<double>(expected), 1e-15);
  const std::vector<double> grad =
      SurrogateLossGradient(Example({0.0}, 0, 0.5, 1.0), empty);
  EXPECT_DOUBLE_EQ(grad[0], -1.0);
  EXPECT_DOUBLE_EQ(grad[1], 1.0);
}

TEST(SurrogateLossTest, EqualsLossWhenPolicyIsCertain) {
  // A single action has probability exactly 1.
  const Ensemble one(1, 1);
  const LoggedExample e = Example({0.2}, 0, 0.4, 0.7);
  EXPECT_DOUBLE_EQ(SurrogateLoss(e, one), Loss(e, one));
  EXPECT_DOUBLE_EQ(SurrogateLoss(e, one), -0.7 / 0.4);
}

TEST(LossTest, GradientsSumToZero) {
  Rng rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 1 + rng.UniformInt(5);
    const std::vector<double> s = UniformVector(rng, k, -5, 5);
    const int a = static_cast<int>(rng.UniformInt(k));
    const double p = UniformIn(rng, 0.05, 1);
    const double r = UniformIn(rng, -1, 1);
    for (const auto& g : {LossGradientAt(s, a, p, r), SurrogateLossGradientAt(s, a, p, r)}) {
      EXPECT_NEAR(std::accumulate(g.begin(), g.end(), 0.0), 0.0, 1e-14);
    }
  }
}

TEST(LossTest, RejectsBadInputs) {
  const std::vector<double> s{0, 0};
  EXPECT_THROW(LossAt(s, 0, 0.0, 1.0), InvalidArgument);
  EXPECT_THROW(LossAt(s, 2, 0.5, 1.0), InvalidArgument);
  EXPECT_THROW(SurrogateLossGradientAt(s, -1, 0.5, 1.0), InvalidArgument);
}

}  // namespace
}  // namespace bopl
