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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "bopl/error.hpp"
#include "support/synthetic.hpp"

namespace bopl {
namespace {

using testing::LogSpec;
using testing::RandomEnsemble;
using testing::RandomLog;
using testing::Stump;

BanditDataset OneExample(double r, double p = 0.5, int action = 0) {
  BanditDataset data(2, 1);
  data.Add({{0.0}, action, p, r});
  return data;
}

TEST(BaseKindTest, Names) {
  EXPECT_EQ(ParseBaseKind("regr"), BaseKind::kRegression);
  EXPECT_EQ(ParseBaseKind("class"), BaseKind::kClassification);
  EXPECT_EQ(ParseBaseKind(BaseKindName(BaseKind::kClassification)),
            BaseKind::kClassification);
  EXPECT_THROW(ParseBaseKind("forest"), InvalidArgument);
}

TEST(SwitchTest, SurrogateAndSmoothness) {
  EXPECT_EQ(SurrogateSwitch(Objective::kBopl, 1.0, 0.3), 0.3);
  EXPECT_EQ(SurrogateSwitch(Objective::kBoplS, 1.0, 0.3), 1.0);
  EXPECT_EQ(SurrogateSwitch(Objective::kBoplS, 0.0, 0.3), 1.0);
  EXPECT_EQ(SurrogateSwitch(Objective::kBoplS, -1.0, 0.3), 0.3);
  EXPECT_EQ(SmoothnessSwitch(Objective::kBopl, -1.0), 1.0);
  EXPECT_EQ(SmoothnessSwitch(Objective::kBoplS, -1.0), 0.5);
  EXPECT_EQ(SmoothnessSwitch(Objective::kBoplS, 1.0), 1.0);
}

TEST(RegressionTargetsTest, HandExample) {
  const auto samples = RegressionTargets(OneExample(1.0), SoftmaxPolicy(Ensemble(2, 1)));
  ASSERT_EQ(samples.size(), 2u);
  EXPECT_DOUBLE_EQ(samples[0].weight, 2.0);
  EXPECT_DOUBLE_EQ(samples[1].weight, 2.0);
  EXPECT_DOUBLE_EQ(samples[0].target, 0.25);
  EXPECT_DOUBLE_EQ(samples[1].target, -0.25);
  EXPECT_EQ(samples[0].features, (std::vector<double>{0.0, 1.0, 0.0}));
  EXPECT_EQ(samples[1].features, (std::vector<double>{0.0, 0.0, 1.0}));
}

TEST(RegressionTargetsTest, ZeroRewardIsInertAndSignFlips) {
  const SoftmaxPolicy uniform(Ensemble(2, 1));
  for (const auto& s : RegressionTargets(OneExample(0.0), uniform)) EXPECT_EQ(s.weight, 0.0);
  const auto pos = RegressionTargets(OneExample(0.7), uniform);
  const auto neg = RegressionTargets(OneExample(-0.7), uniform);
  for (std::size_t r = 0; r < pos.size(); ++r) {
    EXPECT_EQ(pos[r].weight, neg[r].weight);
    EXPECT_EQ(pos[r].target, -neg[r].target);
  }
}

TEST(RegressionTargetsTest, SurrogateVariantUsesSwitches) {
  const SoftmaxPolicy uniform(Ensemble(2, 1));
  // r >= 0: xi = 1, rho = 1 -> target (1 - pi), weight |r|/p.
  const auto pos = RegressionTargets(OneExample(1.0), uniform, Objective::kBoplS);
  EXPECT_DOUBLE_EQ(pos[0].weight, 2.0);
  EXPECT_DOUBLE_EQ(pos[0].target, 0.5);
  // r < 0: xi = pi(a_i), rho = 1/2 -> weight |r|/(2p), target -(2 pi)(e - pi).
  const auto neg = RegressionTargets(OneExample(-1.0), uniform, Objective::kBoplS);
  EXPECT_DOUBLE_EQ(neg[0].weight, 1.0);
  EXPECT_DOUBLE_EQ(neg[0].target, -0.5);
  EXPECT_DOUBLE_EQ(neg[1].target, 0.5);
}

TEST(ClassificationTargetsTest, HandExample) {
  const auto samples =
      ClassificationTargets(OneExample(1.0), SoftmaxPolicy(Ensemble(2, 1)));
  EXPECT_DOUBLE_EQ(samples[0].weight, 0.5);
  EXPECT_DOUBLE_EQ(samples[1].weight, 0.5);
  EXPECT_EQ(samples[0].label, 1);
  EXPECT_EQ(samples[1].label, -1);
}

TEST(ClassificationTargetsTest, NegativeRewardFlipsLabels) {
  Rng rng(41);
  const BanditDataset data = RandomLog(rng, {.n = 10, .num_actions = 3});
  BanditDataset flipped(3, 2);
  for (const LoggedExample& e : data) flipped.Add({e.features, e.action, e.propensity, -e.reward});
  const SoftmaxPolicy policy(RandomEnsemble(rng, 3, 2, 3));
  const auto a = ClassificationTargets(data, policy);
  const auto b = ClassificationTargets(flipped, policy);
  for (std::size_t r = 0; r < a.size(); ++r) {
    EXPECT_EQ(a[r].weight, b[r].weight);
    if (data[r / 3].reward != 0.0) EXPECT_EQ(a[r].label, -b[r].label);
    const bool logged = static_cast<int>(r % 3) == data[r / 3].action;
    if (data[r / 3].reward > 0.0) EXPECT_EQ(a[r].label, logged ? 1 : -1);
  }
}

TEST(ClassificationTargetsTest, WeightTimesLabelIsGradientCoefficient) {
  Rng rng(42);
  const BanditDataset data = RandomLog(rng, {.n = 15, .num_actions = 4});
  const SoftmaxPolicy policy(RandomEnsemble(rng, 4, 2, 3));
  const auto samples = ClassificationTargets(data, policy);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const ActionDistribution pi = policy.Distribution(data[i].features);
    const double c = data[i].reward * pi[data[i].action] / data[i].propensity;
    for (std::size_t a = 0; a < 4; ++a) {
      const double d = (static_cast<int>(a) == data[i].action ? 1.0 : 0.0) - pi[a];
      EXPECT_NEAR(samples[i * 4 + a].weight * samples[i * 4 + a].label, c * d, 1e-15);
    }
  }
}

TEST(WeightedNormTest, ConstantSignPredictorGivesClassificationConstraint) {
  Rng rng(43);
  const BanditDataset data = RandomLog(rng, {.n = 12, .num_actions = 3});
  double expected = 0.0;
  for (const LoggedExample& e : data) expected += std::abs(e.reward) / e.propensity;
  expected *= 3.0 / 12.0;
  const Predictor constant(PredictorKind::kClassificationTree, Tree::Constant(-1.0));
  EXPECT_NEAR(WeightedNorm(constant, data, Objective::kBopl), expected, 1e-12);
}

TEST(RescaleTest, HitsOmegaAndIsIdempotent) {
  Rng rng(44);
  const BanditDataset data = RandomLog(rng, {.n = 20, .num_actions = 3});
  const Predictor h(PredictorKind::kRegressionTree, testing::RandomTree(rng, 5, 3));
  for (Objective obj : {Objective::kBopl, Objective::kBoplS}) {
    const Predictor r = RescaleToOmega(h, data, 2.5, obj);
    EXPECT_NEAR(WeightedNorm(r, data, obj), 2.5, 2.5e-12);
    const Predictor again = RescaleToOmega(r, data, 2.5, obj);
    EXPECT_NEAR(again.scale(), r.scale(), 1e-12 * r.scale());
    const Predictor stretched = RescaleToOmega(h.Rescaled(7.0), data, 2.5, obj);
    EXPECT_NEAR(stretched.scale(), r.scale(), 1e-12 * r.scale());
  }
}

TEST(RescaleTest, VanishingPredictorIsDegenerate) {
  const Predictor zero = Predictor::Constant(0.0);
  EXPECT_THROW(RescaleToOmega(zero, OneExample(1.0), 1.0, Objective::kBopl), DegenerateData);
  EXPECT_THROW(RescaleToOmega(Predictor::Constant(1.0), OneExample(0.0), 1.0, Objective::kBopl),
               DegenerateData);
}

TEST(WeightedErrorTest, PerfectAndAlwaysWrong) {
  const std::vector<WeightedClassificationSample> samples{
      {{0.0}, 1.0, -1}, {{1.0}, 2.0, 1}, {{2.0}, 0.5, 1}};
  const Predictor perfect(PredictorKind::kClassificationTree, Stump(0, 0.5, -1, 1));
  const Predictor wrong(PredictorKind::kClassificationTree, Stump(0, 0.5, 1, -1));
  EXPECT_EQ(WeightedErrorRate(perfect, samples), 0.0);
  EXPECT_EQ(WeightedErrorRate(wrong, samples), 1.0);
  const Predictor constant(PredictorKind::kClassificationTree, Tree::Constant(1.0));
  EXPECT_DOUBLE_EQ(WeightedErrorRate(constant, samples), 1.0 / 3.5);
  EXPECT_THROW(WeightedErrorRate(std::vector<double>{1.0}, std::vector<double>{0.0},
                                 std::vector<int>{1}),
               DegenerateData);
}

TEST(RowSoftmaxTest, MatchesPerRowSoftmax) {
  const std::vector<double> scores{0, 0, 1, 2, 3, -1};
  const std::vector<double> p = RowSoftmax(scores, 3);
  const ActionDistribution r0 = Softmax(std::vector<double>{0, 0, 1});
  const ActionDistribution r1 = Softmax(std::vector<double>{2, 3, -1});
  for (std::size_t a = 0; a < 3; ++a) {
    EXPECT_EQ(p[a], r0[a]);
    EXPECT_EQ(p[3 + a], r1[a]);
  }
  EXPECT_THROW(RowSoftmax(scores, 4), DimensionMismatch);
}

}  // namespace
}  // namespace bopl
