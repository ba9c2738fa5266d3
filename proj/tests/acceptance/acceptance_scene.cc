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

// Scene end-to-end criteria: BOPL with regression trees against the
// logging policy and against boosted reward regression, averaged over ten
// simulated trials. The data is a multilabel supervised CSV (see
// tools/scripts/scene_arff_to_csv.py) located by --data, the BOPL_SCENE_CSV
// environment variable or --default-data, in that order.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "bopl/boosting.hpp"
#include "bopl/data_io.hpp"
#include "bopl/estimators.hpp"
#include "bopl/simulation.hpp"
#include "criteria.hpp"

namespace bopl::acceptance {
namespace {

constexpr int kTrials = 10;
constexpr std::uint64_t kSeed = 2026;
constexpr double kMinGain = 0.15;
constexpr double kBandLow = 0.68;
constexpr double kBandHigh = 0.86;
constexpr double kMinDmGap = 0.05;
constexpr double kPipelineSeconds = 300.0;

BoostConfig SceneTreeConfig() {
  BoostConfig config;
  config.rounds = 500;
  config.tree.max_depth = 12;
  config.tree.min_child_weight = 60;
  return config;
}

struct TrialOutcome {
  double logging_test = 0;
  double bopl_test = 0;
  double brr_test = 0;
  double brr_dm = 0;
  double brr_shrinkage = 0;
};

double ArgmaxReward(const Ensemble& ensemble, const SupervisedDataset& data,
                    const RewardSpec& spec) {
  return GroundTruthReward(SoftmaxPolicy::Argmax(ensemble), data, spec).value;
}

struct SceneRun {
  std::vector<TrialOutcome> trials;
  double pipeline_seconds = 0;
};

// Runs body(t) for every trial on `jobs` threads. Trials depend only on
// their index, so the outcome does not depend on the thread count.
template <typename Body>
void ForEachTrial(int jobs, Body body) {
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t = next++; t < kTrials; t = next++) body(static_cast<std::size_t>(t));
  };
  std::vector<std::jthread> pool;
  for (int j = 1; j < std::clamp(jobs, 1, kTrials); ++j) pool.emplace_back(worker);
  worker();
}

// The BOPL pipeline (simulate, train, evaluate) is timed on its own; the
// BRR baseline runs afterwards.
SceneRun RunScene(const SupervisedDataset& data, int jobs) {
  const RewardSpec spec = RewardSpec::Named("none", Task::kMultilabel);
  TrialConfig trial_config;
  trial_config.logging.l2_strength = 0.1;
  SceneRun run;
  run.trials.resize(kTrials);
  std::vector<std::optional<Trial>> trials(kTrials);
  const auto start = std::chrono::steady_clock::now();
  ForEachTrial(jobs, [&](std::size_t t) {
    trials[t] = MakeTrial(data, spec, trial_config, kSeed, t);
    const Trial& trial = *trials[t];
    TrialOutcome& outcome = run.trials[t];
    outcome.logging_test = LoggingPolicyReward(trial.logging_policy, trial.test, spec);
    BoostConfig config = SceneTreeConfig();
    config.reward_translation = -0.2;
    outcome.bopl_test = ArgmaxReward(Train(trial.log, config).ensemble, trial.test, spec);
  });
  run.pipeline_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  ForEachTrial(jobs, [&](std::size_t t) {
    const Trial& trial = *trials[t];
    TrialOutcome& outcome = run.trials[t];
    double best_validation = -1;
    for (const double shrinkage : {0.03, 0.1, 0.3}) {
      BoostConfig config = SceneTreeConfig();
      config.algorithm = Algorithm::kBrr;
      config.shrinkage = shrinkage;
      const Ensemble model = TrainBrr(trial.log, config).ensemble;
      const double validation = ArgmaxReward(model, trial.validation, spec);
      if (validation <= best_validation) continue;
      best_validation = validation;
      outcome.brr_shrinkage = shrinkage;
      outcome.brr_test = ArgmaxReward(model, trial.test, spec);
      std::vector<std::vector<double>> contexts;
      for (const SupervisedExample& e : trial.test.examples) contexts.push_back(e.features);
      outcome.brr_dm = DmReward(model, SoftmaxPolicy::Argmax(model), contexts).value;
    }
  });
  return run;
}

double Mean(const std::vector<TrialOutcome>& trials, double TrialOutcome::*field) {
  double total = 0;
  for (const TrialOutcome& t : trials) total += t.*field;
  return total / static_cast<double>(trials.size());
}

std::vector<Criterion> SceneCriteria(const std::optional<std::filesystem::path>& path,
                                     int jobs) {
  if (!path) {
    auto missing = [] {
      return Verdict{false, "Scene data not found; pass --data or set BOPL_SCENE_CSV"};
    };
    return {{9, "Scene end-to-end run", 0.0, missing},
            {10, "Scene BOPL versus BRR", 0.0, missing}};
  }
  auto run = std::make_shared<std::optional<SceneRun>>();
  auto get = [run, path, jobs]() -> const SceneRun& {
    if (!*run) *run = RunScene(ReadSupervisedCsv(*path, Task::kMultilabel), jobs);
    return **run;
  };
  return {
      {9, "Scene end-to-end run", 0.0,
       [get] {
         const SceneRun& r = get();
         const double bopl = Mean(r.trials, &TrialOutcome::bopl_test);
         const double logging = Mean(r.trials, &TrialOutcome::logging_test);
         const bool pass = r.pipeline_seconds < kPipelineSeconds &&
                           bopl - logging >= kMinGain && bopl >= kBandLow &&
                           bopl <= kBandHigh;
         return Verdict{pass, Detail("BOPL test reward %.4f, logging %.4f, gain %.4f (min "
                                     "%.2f, band [%.2f, %.2f]); pipeline %.1f s (limit %.0f)",
                                     bopl, logging, bopl - logging, kMinGain, kBandLow,
                                     kBandHigh, r.pipeline_seconds, kPipelineSeconds)};
       }},
      {10, "Scene BOPL versus BRR", 0.0,
       [get] {
         const SceneRun& r = get();
         const double bopl = Mean(r.trials, &TrialOutcome::bopl_test);
         const double brr = Mean(r.trials, &TrialOutcome::brr_test);
         const double dm = Mean(r.trials, &TrialOutcome::brr_dm);
         const bool pass = bopl > brr && brr - dm >= kMinDmGap;
         return Verdict{pass, Detail("BOPL %.4f vs BRR %.4f; BRR DM estimate %.4f, "
                                     "underestimate %.4f (min %.2f)",
                                     bopl, brr, dm, brr - dm, kMinDmGap)};
       }},
  };
}

}  // namespace
}  // namespace bopl::acceptance

int main(int argc, char** argv) {
  CLI::App app("bopl Scene acceptance criteria");
  std::string data, default_data;
  app.add_option("--data", data, "Scene supervised CSV");
  app.add_option("--default-data", default_data, "fallback location of the CSV");
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--jobs", jobs, "trials run in parallel")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  if (data.empty()) {
    if (const char* env = std::getenv("BOPL_SCENE_CSV")) data = env;
  }
  if (data.empty()) data = default_data;
  std::optional<std::filesystem::path> path;
  if (!data.empty() && std::filesystem::exists(data)) path = data;
  const int failures = bopl::acceptance::RunCriteria(
      bopl::acceptance::SceneCriteria(path, jobs), std::cout);
  return failures == 0 ? 0 : 1;
}
