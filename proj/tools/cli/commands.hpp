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

// The subcommands of the `bopl` tool as library calls. Each writes its
// human-readable report to `out`, throws bopl::Error on failure and removes
// any files it had already written before rethrowing.

#ifndef BOPL_TOOLS_COMMANDS_HPP_
#define BOPL_TOOLS_COMMANDS_HPP_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bopl/estimators.hpp"
#include "cli/run_config.hpp"

namespace bopl::cli {

// BOPL_JOBS if set to a positive integer, else the hardware concurrency.
int DefaultJobs();

// Runs fn(0..count-1) on up to `jobs` threads. The first exception is
// rethrown after every worker has finished.
void ParallelFor(std::size_t count, int jobs,
                 const std::function<void(std::size_t)>& fn);

struct SimulateOptions {
  std::filesystem::path input;
  std::filesystem::path out_dir;
  RunConfig config;
  int jobs = 1;
};

// Per trial t writes <out_dir>/trial_<t>/ with log.csv, logging_subset.csv,
// train.csv, validation.csv, test.csv, logging_policy.json and
// manifest.json, plus <out_dir>/config.json.
void RunSimulate(const SimulateOptions& options, std::ostream& out);

struct TrainOptions {
  std::filesystem::path log;
  std::filesystem::path out_model;
  std::optional<std::filesystem::path> out_trace;
  // Supervised file scored after every round when patience > 0.
  std::optional<std::filesystem::path> validation;
  RunConfig config;
};

struct TrainSummary {
  std::size_t rounds = 0;
  StopReason stop_reason = StopReason::kRoundsExhausted;
};

TrainSummary RunTrain(const TrainOptions& options, std::ostream& out);

struct EvaluateOptions {
  std::filesystem::path model;
  // Supervised CSV for `truth`, bandit log otherwise.
  std::filesystem::path data;
  std::optional<std::filesystem::path> reward_model;
  // Evaluate the softmax policy at the model's beta instead of argmax.
  bool stochastic = false;
  RunConfig config;
};

// Prints `estimator=<name> reward=<value> n=<count>`; the value is always a
// reward (IPS risks are negated).
RiskEstimate RunEvaluate(const EvaluateOptions& options, std::ostream& out);

struct DiagnoseOptions {
  std::filesystem::path model;
  std::filesystem::path log;
  // Per-prefix risk curve CSV.
  std::optional<std::filesystem::path> out_curve;
  RunConfig config;
};

void RunDiagnose(const DiagnoseOptions& options, std::ostream& out);

struct SweepOptions {
  std::filesystem::path grid;
  // Supervised CSV every trial is simulated from.
  std::filesystem::path data;
  std::filesystem::path out;
  std::optional<std::filesystem::path> out_best;
  // Configurations drawn from the grid; 0 or more than the grid size means
  // the whole grid.
  std::size_t samples = 0;
  std::string metric = "validation-reward";
  RunConfig config;
  int jobs = 1;
};

struct SweepRow {
  RunConfig config;
  double mean_validation = 0.0;
  double std_validation = 0.0;
  double mean_test = 0.0;
};

// Rows ranked by descending mean validation reward; ties keep grid order.
std::vector<SweepRow> RunSweep(const SweepOptions& options, std::ostream& out);

}  // namespace bopl::cli

#endif  // BOPL_TOOLS_COMMANDS_HPP_
