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

#include "bopl/data_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>

#include "bopl/error.hpp"
#include "bopl/random.hpp"
#include "support/synthetic.hpp"

namespace bopl {
namespace {

SupervisedDataset ReadCsv(const std::string& text) {
  std::istringstream in(text);
  return ReadSupervisedCsv(in);
}

BanditDataset ReadLog(const std::string& text) {
  std::istringstream in(text);
  return ReadBanditLog(in);
}

TEST(SupervisedCsvTest, RoundTripIsExact) {
  Rng rng(81);
  SupervisedDataset data = testing::LinearMulticlass(rng, 25, 4, 3);
  data.examples[0].features[1] = 0.1 + 0.2;
  data.examples[1].features[0] = -5e-324;
  std::ostringstream out;
  WriteSupervisedCsv(out, data);
  EXPECT_EQ(ReadCsv(out.str()), data);
}

TEST(SupervisedCsvTest, MultilabelRoundTrip) {
  SupervisedDataset data;
  data.task = Task::kMultilabel;
  data.num_classes = 5;
  data.feature_dim = 2;
  data.examples = {{{1.5, -2.0}, {0, 3}}, {{0.0, 0.25}, {}}, {{7.0, 8.0}, {4}}};
  std::ostringstream out;
  WriteSupervisedCsv(out, data);
  EXPECT_EQ(ReadCsv(out.str()), data);
}

TEST(SupervisedCsvTest, InfersClassCountAndRejectsBadRows) {
  const SupervisedDataset data = ReadCsv("label,f0\n2,0.5\n0,1\n");
  EXPECT_EQ(data.num_classes, 3);
  EXPECT_EQ(data.feature_dim, 1);
  EXPECT_THROW(ReadCsv("label,f0\n1,abc\n"), FormatError);
  EXPECT_THROW(ReadCsv("label,f0\n-1,0.5\n"), FormatError);
  EXPECT_THROW(ReadCsv("label,f0\n1\n"), FormatError);
  EXPECT_THROW(ReadCsv("# num_classes=2\nlabel,f0\n2,0.5\n"), FormatError);
  EXPECT_THROW(ReadCsv("class,f0\n1,0.5\n"), FormatError);
}

TEST(SupervisedCsvTest, ErrorsCarryLineNumbers) {
  try {
    ReadCsv("label,f0\n0,1\n1,nan-ish\n");
    FAIL() << "expected a FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(BanditLogTest, RoundTripIsExact) {
  Rng rng(82);
  testing::LogSpec spec;
  spec.n = 40;
  spec.num_actions = 5;
  spec.feature_dim = 3;
  const BanditDataset log = testing::RandomLog(rng, spec);
  std::ostringstream out;
  WriteBanditLog(out, log);
  EXPECT_EQ(ReadLog(out.str()), log);
}

TEST(BanditLogTest, RejectsInvalidRows) {
  const std::string header = "# num_actions=2\naction,propensity,reward,f0\n";
  EXPECT_NO_THROW(ReadLog(header + "1,1,0.5,3\n"));
  EXPECT_THROW(ReadLog(header + "1,0,0.5,3\n"), FormatError);
  EXPECT_THROW(ReadLog(header + "1,1.5,0.5,3\n"), FormatError);
  EXPECT_THROW(ReadLog(header + "2,0.5,0.5,3\n"), FormatError);
  EXPECT_THROW(ReadLog(header + "0,0.5,inf,3\n"), FormatError);
  EXPECT_THROW(ReadLog(header + "0,0.5,1\n"), FormatError);
  EXPECT_THROW(ReadLog("propensity,action,reward\n"), FormatError);
  EXPECT_EQ(ReadLog("action,propensity,reward,f0\n3,0.5,1,2\n").num_actions(), 4);
}

Model SampleModel() {
  Rng rng(83);
  Model model{testing::RandomEnsemble(rng, 3, 2, 4, 3), 1.0, {}};
  Tree signs({TreeNode{.feature = 2, .threshold = 0.5, .left = 1, .right = 2},
              TreeNode{.value = -1.0}, TreeNode{.value = 1.0}});
  model.ensemble.Add(0.3, Predictor(PredictorKind::kClassificationTree, signs, 0.7));
  model.metadata = {{"algorithm", "bopl"}, {"config.omega", "1"}};
  return model;
}

TEST(ModelJsonTest, RoundTripIsExact) {
  const Model model = SampleModel();
  const Model back = ModelFromJson(ModelToJson(model));
  EXPECT_EQ(back.ensemble, model.ensemble);
  EXPECT_EQ(back.beta, model.beta);
  EXPECT_EQ(back.metadata, model.metadata);
  EXPECT_EQ(ModelToJson(back), ModelToJson(model));
}

TEST(ModelJsonTest, ArgmaxBetaSurvives) {
  Model model = SampleModel();
  model.beta = kArgmaxBeta;
  EXPECT_EQ(ModelFromJson(ModelToJson(model)).beta, kArgmaxBeta);
}

TEST(ModelJsonTest, RejectsMalformedDocuments) {
  const std::string good = ModelToJson(SampleModel());
  EXPECT_THROW(ModelFromJson("{"), FormatError);
  EXPECT_THROW(ModelFromJson("{\"format\":\"other\"}"), FormatError);
  std::string wrong_version = good;
  wrong_version.replace(wrong_version.find("\"format_version\": 1"), 19,
                        "\"format_version\": 9");
  EXPECT_THROW(ModelFromJson(wrong_version), FormatError);
  std::string bad_leaf = good;
  const auto pos = bad_leaf.find("\"kind\": \"classification_tree\"");
  ASSERT_NE(pos, std::string::npos);
  const auto value = bad_leaf.find("\"value\": -1", pos);
  ASSERT_NE(value, std::string::npos);
  bad_leaf.replace(value, 11, "\"value\": -2");
  EXPECT_THROW(ModelFromJson(bad_leaf), FormatError);
}

TEST(TraceTest, RoundTripKeepsEveryStoredField) {
  TrainTrace trace;
  trace.algorithm = Algorithm::kBoplS;
  trace.omega = 2.5;
  trace.r_star = -1.25;
  trace.delta0 = 0.75;
  trace.initial_risk = -0.5;
  trace.initial_surrogate_risk = 0.1 + 0.2;
  trace.stop_reason = StopReason::kValidation;
  trace.kept_rounds = 1;
  for (int t = 1; t <= 2; ++t) {
    RoundStats s;
    s.round = t;
    s.alpha = 0.1 * t;
    s.grad_term = 1.0 / 3.0;
    s.grad_norm = 0.5;
    s.emp_risk = -0.6;
    s.surrogate_risk = t == 1 ? std::optional<double>(0.2) : std::nullopt;
    s.snips_train = t == 2 ? std::numeric_limits<double>::quiet_NaN() : 0.4;
    s.bound = 1e-300;
    s.omega_effective = 2.5;
    s.error_rate = 0.125;
    s.validation_reward = 0.875;
    trace.rounds.push_back(s);
  }
  const Metadata meta{{"config.seed", "7"}, {"algorithm", "bopl_s"}};
  std::ostringstream out;
  WriteTrace(out, trace, meta);
  std::istringstream in(out.str());
  const TraceFile back = ReadTrace(in);
  EXPECT_EQ(back.metadata, meta);
  ASSERT_EQ(back.trace.rounds.size(), 2u);
  EXPECT_TRUE(std::isnan(back.trace.rounds[1].snips_train));
  TrainTrace expected = trace;
  TrainTrace actual = back.trace;
  expected.rounds[1].snips_train = actual.rounds[1].snips_train = 0.0;
  EXPECT_EQ(actual, expected);
}

TEST(TraceTest, RejectsInconsistentKeptRounds) {
  TrainTrace trace;
  trace.kept_rounds = 0;
  std::ostringstream out;
  WriteTrace(out, trace);
  std::string text = out.str();
  const auto pos = text.find("kept_rounds=0");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 13, "kept_rounds=4");
  std::istringstream in(text);
  EXPECT_THROW(ReadTrace(in), FormatError);
  EXPECT_THROW(WriteTrace(out, trace, {{"bad key", "x\ny"}}), InvalidArgument);
}

TEST(FileHelpersTest, MissingFilesRaiseIoError) {
  const std::filesystem::path missing = "/nonexistent-dir/none.csv";
  EXPECT_THROW(ReadFile(missing), IoError);
  EXPECT_THROW(ReadBanditLog(missing), IoError);
  EXPECT_THROW(WriteFile(missing, "x"), IoError);
}

}  // namespace
}  // namespace bopl
