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

#include "cli/app.hpp"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "bopl/error.hpp"
#include "cli/commands.hpp"
#include "cli/run_config.hpp"

namespace bopl::cli {
namespace {

namespace fs = std::filesystem;

std::string FlagName(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

// The --config file plus one override flag per RunConfig key.
class ConfigFlags {
 public:
  void Attach(CLI::App* sub) {
    sub->add_option("--config", config_path_, "JSON run configuration");
    for (const std::string& key : RunConfig::Keys()) {
      std::string names = FlagName(key);
      if (key == "algorithm") names += ",--algo";
      sub->add_option(names, overrides_[key], "config key " + key);
    }
  }

  RunConfig Resolve(CLI::App* sub) const {
    RunConfig config = config_path_ ? LoadRunConfig(*config_path_) : RunConfig{};
    for (const std::string& key : RunConfig::Keys()) {
      std::string name = FlagName(key);
      if (sub->count(name) > 0) config.Set(key, overrides_.at(key));
    }
    config.ToBoostConfig();
    return config;
  }

 private:
  std::optional<fs::path> config_path_;
  std::map<std::string, std::string> overrides_;
};

}  // namespace

int RunApp(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Boosted off-policy learning from logged bandit feedback", "bopl"};
  app.require_subcommand(1);
  int jobs = DefaultJobs();

  CLI::App* simulate =
      app.add_subcommand("simulate", "Turn a supervised CSV into bandit trials");
  SimulateOptions sim;
  ConfigFlags sim_flags;
  simulate->add_option("--input", sim.input, "supervised CSV")->required();
  simulate->add_option("--out-dir", sim.out_dir, "output directory")->required();
  simulate->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  sim_flags.Attach(simulate);

  CLI::App* train = app.add_subcommand("train", "Train a policy on a bandit log");
  TrainOptions tr;
  ConfigFlags train_flags;
  train->add_option("--log", tr.log, "bandit log CSV")->required();
  train->add_option("--out-model", tr.out_model, "model JSON")->required();
  train->add_option("--out-trace", tr.out_trace, "per-round trace CSV");
  train->add_option("--validation", tr.validation,
                    "supervised CSV for early stopping");
  train_flags.Attach(train);

  CLI::App* evaluate = app.add_subcommand("evaluate", "Estimate a policy's reward");
  EvaluateOptions ev;
  ConfigFlags eval_flags;
  evaluate->add_option("--model", ev.model, "model JSON")->required();
  evaluate->add_option("--data", ev.data, "supervised CSV or bandit log")->required();
  evaluate->add_option("--reward-model", ev.reward_model, "reward model for dm");
  evaluate->add_flag("--stochastic", ev.stochastic,
                     "evaluate the softmax policy instead of argmax");
  eval_flags.Attach(evaluate);

  CLI::App* diagnose =
      app.add_subcommand("diagnose", "Risk, excess risk and bound of a model");
  DiagnoseOptions dg;
  ConfigFlags diag_flags;
  diagnose->add_option("--model", dg.model, "model JSON")->required();
  diagnose->add_option("--log", dg.log, "bandit log CSV")->required();
  diagnose->add_option("--out-curve", dg.out_curve, "per-prefix curve CSV");
  diag_flags.Attach(diagnose);

  CLI::App* sweep = app.add_subcommand("sweep", "Grid search over configurations");
  SweepOptions sw;
  ConfigFlags sweep_flags;
  sweep->add_option("--grid", sw.grid, "JSON grid")->required();
  sweep->add_option("--data", sw.data, "supervised CSV")->required();
  sweep->add_option("--out", sw.out, "ranked results CSV")->required();
  sweep->add_option("--out-best", sw.out_best, "best configuration JSON");
  sweep->add_option("--samples", sw.samples, "configurations to sample (0 = all)");
  sweep->add_option("--metric", sw.metric, "ranking metric")
      ->check(CLI::IsMember({"validation-reward"}));
  sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  sweep_flags.Attach(sweep);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (simulate->parsed()) {
      sim.config = sim_flags.Resolve(simulate);
      sim.jobs = jobs;
      RunSimulate(sim, out);
    } else if (train->parsed()) {
      tr.config = train_flags.Resolve(train);
      RunTrain(tr, out);
    } else if (evaluate->parsed()) {
      ev.config = eval_flags.Resolve(evaluate);
      RunEvaluate(ev, out);
    } else if (diagnose->parsed()) {
      dg.config = diag_flags.Resolve(diagnose);
      RunDiagnose(dg, out);
    } else if (sweep->parsed()) {
      sw.config = sweep_flags.Resolve(sweep);
      sw.jobs = jobs;
      RunSweep(sw, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace bopl::cli
