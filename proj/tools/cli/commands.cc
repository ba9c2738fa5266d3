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

#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "bopl/boosting.hpp"
#include "bopl/data_io.hpp"
#include "bopl/error.hpp"
#include "bopl/numeric.hpp"
#include "bopl/random.hpp"
#include "bopl/simulation.hpp"
#include "json.hpp"

namespace bopl::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// Removes every tracked output unless Commit() was called.
class OutputGuard {
 public:
  OutputGuard() = default;
  OutputGuard(const OutputGuard&) = delete;
  OutputGuard& operator=(const OutputGuard&) = delete;
  ~OutputGuard() {
    if (committed_) return;
    for (auto it = paths_.rbegin(); it != paths_.rend(); ++it) {
      std::error_code ec;
      fs::remove_all(*it, ec);
    }
  }

  void Track(const fs::path& path) {
    std::lock_guard<std::mutex> lock(mu_);
    paths_.push_back(path);
  }

  // Creates `dir` (and parents); tracks it only if it did not exist.
  void CreateDirectory(const fs::path& dir) {
    if (fs::exists(dir)) {
      if (!fs::is_directory(dir)) {
        throw IoError("'" + dir.string() + "' exists and is not a directory");
      }
      return;
    }
    fs::create_directories(dir);
    Track(dir);
  }

  void Commit() { committed_ = true; }

 private:
  std::mutex mu_;
  std::vector<fs::path> paths_;
  bool committed_ = false;
};

Json IndexArray(const std::vector<std::size_t>& indices) {
  Json a = Json::array();
  for (std::size_t i : indices) a.push_back(i);
  return a;
}

std::string LoggingPolicyJson(const LoggingPolicy& policy) {
  Json doc;
  doc["num_actions"] = policy.num_actions();
  doc["feature_dim"] = policy.feature_dim();
  doc["epsilon"] = policy.epsilon();
  doc["weights"] = policy.weights();
  return doc.dump(1) + "\n";
}

std::string TrialDirName(std::size_t t) {
  std::string digits = std::to_string(t);
  if (digits.size() < 2) digits.insert(0, 2 - digits.size(), '0');
  return "trial_" + digits;
}

double MetaDouble(const Metadata& meta, const std::string& key, double fallback) {
  const auto it = meta.find(key);
  return it == meta.end() ? fallback : ParseDouble(it->second);
}

// Mean and sample standard deviation.
std::pair<double, double> MeanStd(const std::vector<double>& values) {
  const double mean = PairwiseSum(values) / static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    sq[i] = (values[i] - mean) * (values[i] - mean);
  }
  return {mean, std::sqrt(PairwiseSum(sq) / static_cast<double>(values.size() - 1))};
}

// Trains the configured algorithm on a log.
TrainResult TrainOn(const BanditDataset& log, const RunConfig& config,
                    const ValidationFn& validation = {}) {
  const BoostConfig boost = config.ToBoostConfig();
  if (boost.algorithm == Algorithm::kBrr) return TrainBrr(log, boost);
  return Train(log, boost, validation);
}

}  // namespace

int DefaultJobs() {
  if (const char* env = std::getenv("BOPL_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void ParallelFor(std::size_t count, int jobs,
                 const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
          next.store(count);
        }
      }
    });
  }
  for (std::thread& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

// --- simulate ----------------------------------------------------------------

void RunSimulate(const SimulateOptions& options, std::ostream& out) {
  const RunConfig& config = options.config;
  const TrialConfig trial_config = config.ToTrialConfig();
  const RewardSpec spec = config.ToRewardSpec();
  const SupervisedDataset data = ReadSupervisedCsv(options.input, config.ToTask());

  OutputGuard guard;
  guard.CreateDirectory(options.out_dir);
  const fs::path config_path = options.out_dir / "config.json";
  guard.Track(config_path);
  WriteFile(config_path, config.ToJson());

  const auto trials = static_cast<std::size_t>(config.trials);
  std::vector<std::string> reports(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    guard.CreateDirectory(options.out_dir / TrialDirName(t));
  }
  ParallelFor(trials, options.jobs, [&](std::size_t t) {
    const Trial trial = MakeTrial(data, spec, trial_config, config.seed, t);
    const fs::path dir = options.out_dir / TrialDirName(t);
    auto write = [&](const char* name, auto&& writer) {
      guard.Track(dir / name);
      writer(dir / name);
    };
    write("log.csv", [&](const fs::path& p) { WriteBanditLog(p, trial.log); });
    write("logging_subset.csv",
          [&](const fs::path& p) { WriteSupervisedCsv(p, trial.logging_subset); });
    write("train.csv", [&](const fs::path& p) { WriteSupervisedCsv(p, trial.train); });
    write("validation.csv",
          [&](const fs::path& p) { WriteSupervisedCsv(p, trial.validation); });
    write("test.csv", [&](const fs::path& p) { WriteSupervisedCsv(p, trial.test); });
    write("logging_policy.json", [&](const fs::path& p) {
      WriteFile(p, LoggingPolicyJson(trial.logging_policy));
    });

    const double val_reward =
        LoggingPolicyReward(trial.logging_policy, trial.validation, spec);
    const double test_reward = LoggingPolicyReward(trial.logging_policy, trial.test, spec);
    Json manifest;
    manifest["trial"] = t;
    manifest["seed"] = trial.seed;
    manifest["config"] = Json::parse(config.ToJson());
    manifest["sizes"] = {{"logging", trial.logging_indices.size()},
                         {"train", trial.train_indices.size()},
                         {"validation", trial.validation_indices.size()},
                         {"test", trial.test_indices.size()}};
    manifest["logging_reward"] = {{"validation", val_reward}, {"test", test_reward}};
    manifest["indices"] = {{"logging", IndexArray(trial.logging_indices)},
                           {"train", IndexArray(trial.train_indices)},
                           {"validation", IndexArray(trial.validation_indices)},
                           {"test", IndexArray(trial.test_indices)}};
    write("manifest.json",
          [&](const fs::path& p) { WriteFile(p, manifest.dump(1) + "\n"); });

    std::ostringstream line;
    line << TrialDirName(t) << ": log=" << trial.log.size()
         << " logging_validation_reward=" << FormatDouble(val_reward)
         << " logging_test_reward=" << FormatDouble(test_reward);
    reports[t] = line.str();
  });
  for (const std::string& r : reports) out << r << '\n';
  guard.Commit();
}

// --- train -------------------------------------------------------------------

TrainSummary RunTrain(const TrainOptions& options, std::ostream& out) {
  const RunConfig& config = options.config;
  const BanditDataset log = ReadBanditLog(options.log);

  ValidationFn validation;
  std::optional<SupervisedDataset> held_out;
  const RewardSpec spec = config.ToRewardSpec();
  if (options.validation) {
    held_out = ReadSupervisedCsv(*options.validation, config.ToTask());
    validation = [&](const Ensemble& ensemble) {
      return GroundTruthReward(SoftmaxPolicy::Argmax(ensemble), *held_out, spec).value;
    };
  } else if (config.patience > 0) {
    throw InvalidArgument("patience needs a --validation file");
  }
  const TrainResult result = TrainOn(log, config, validation);

  Metadata meta = config.ToMetadata();
  meta["algorithm"] = std::string(AlgorithmName(result.trace.algorithm));
  meta["seed"] = std::to_string(config.seed);
  meta["rounds_completed"] = std::to_string(result.trace.rounds.size());
  meta["stop_reason"] = std::string(StopReasonName(result.trace.stop_reason));
  meta["num_examples"] = std::to_string(log.size());

  OutputGuard guard;
  guard.Track(options.out_model);
  WriteModel(options.out_model, Model{result.ensemble, 1.0, meta});
  if (options.out_trace) {
    guard.Track(*options.out_trace);
    WriteTrace(*options.out_trace, result.trace, config.ToMetadata());
  }
  guard.Commit();

  out << "algorithm=" << AlgorithmName(result.trace.algorithm)
      << " rounds=" << result.trace.rounds.size()
      << " members=" << result.ensemble.size()
      << " stop_reason=" << StopReasonName(result.trace.stop_reason) << '\n';
  return {result.trace.rounds.size(), result.trace.stop_reason};
}

// --- evaluate ----------------------------------------------------------------

RiskEstimate RunEvaluate(const EvaluateOptions& options, std::ostream& out) {
  const RunConfig& config = options.config;
  const Model model = ReadModel(options.model);
  const SoftmaxPolicy policy = options.stochastic ? model.Policy() : model.ArgmaxPolicy();
  Estimator estimator = ParseEstimator(config.estimator);
  if (estimator == Estimator::kIps && config.clip_cap) estimator = Estimator::kIpsClipped;

  RiskEstimate est;
  switch (estimator) {
    case Estimator::kTruth: {
      const SupervisedDataset data = ReadSupervisedCsv(options.data, config.ToTask());
      est = GroundTruthReward(policy, data, config.ToRewardSpec());
      break;
    }
    case Estimator::kIps:
    case Estimator::kIpsClipped: {
      if (estimator == Estimator::kIpsClipped && !config.clip_cap) {
        throw InvalidArgument("ips_clipped needs --clip-cap");
      }
      est = IpsRisk(policy, ReadBanditLog(options.data), config.clip_cap);
      break;
    }
    case Estimator::kSnips:
      est = SnipsReward(policy, ReadBanditLog(options.data));
      break;
    case Estimator::kDm: {
      if (!options.reward_model) throw InvalidArgument("dm needs --reward-model");
      const Model reward_model = ReadModel(*options.reward_model);
      const BanditDataset log = ReadBanditLog(options.data);
      std::vector<std::vector<double>> contexts;
      contexts.reserve(log.size());
      for (const LoggedExample& e : log) contexts.push_back(e.features);
      est = DmReward(reward_model.ensemble, policy, contexts);
      break;
    }
  }
  out << "estimator=" << EstimatorName(est.estimator)
      << " reward=" << FormatDouble(est.reward()) << " n=" << est.n << '\n';
  return est;
}

// --- diagnose ----------------------------------------------------------------

void RunDiagnose(const DiagnoseOptions& options, std::ostream& out) {
  const Model model = ReadModel(options.model);
  const BanditDataset log = ReadBanditLog(options.log);
  const double translation = MetaDouble(model.metadata, "config.reward_translation",
                                        options.config.reward_translation);
  const double omega =
      MetaDouble(model.metadata, "config.omega", options.config.omega);
  const BanditDataset train = TranslateRewards(log, -translation);
  const Ensemble& ensemble = model.ensemble;
  if (ensemble.num_actions() != log.num_actions() ||
      ensemble.feature_dim() != log.feature_dim()) {
    throw DimensionMismatch("model and log disagree in actions or features");
  }

  const auto k = static_cast<std::size_t>(log.num_actions());
  std::vector<double> scores(log.size() * k, 0.0);
  std::vector<double> alphas;
  std::vector<double> risks{EmpiricalRiskFromScores(train, scores)};
  std::vector<double> surrogates{SurrogateRiskFromScores(train, scores)};
  for (const EnsembleMember& m : ensemble.members()) {
    for (std::size_t i = 0; i < log.size(); ++i) {
      for (std::size_t a = 0; a < k; ++a) {
        scores[i * k + a] += m.alpha * m.predictor.Score(log[i].features, a);
      }
    }
    alphas.push_back(m.alpha);
    risks.push_back(EmpiricalRiskFromScores(train, scores));
    surrogates.push_back(SurrogateRiskFromScores(train, scores));
  }
  const double r_star = MinEmpiricalRisk(train);
  const double delta0 = std::max(0.0, risks.front() - r_star);
  const std::vector<double> bound = ExcessRiskBound(alphas, omega, delta0);

  const SoftmaxPolicy argmax = model.ArgmaxPolicy();
  out << "members=" << ensemble.size() << '\n'
      << "reward_translation=" << FormatDouble(translation) << '\n'
      << "omega=" << FormatDouble(omega) << '\n'
      << "r_star=" << FormatDouble(r_star) << '\n'
      << "delta0=" << FormatDouble(delta0) << '\n'
      << "emp_risk=" << FormatDouble(risks.back()) << '\n'
      << "surrogate_risk=" << FormatDouble(surrogates.back()) << '\n'
      << "excess_risk=" << FormatDouble(risks.back() - r_star) << '\n'
      << "bound=" << FormatDouble(bound.empty() ? delta0 : bound.back()) << '\n'
      << "ips_reward_argmax=" << FormatDouble(IpsRisk(argmax, log).reward()) << '\n';
  try {
    out << "snips_reward_argmax=" << FormatDouble(SnipsReward(argmax, log).value)
        << '\n';
  } catch (const DegenerateData&) {
    out << "snips_reward_argmax=nan\n";
  }

  if (options.out_curve) {
    OutputGuard guard;
    guard.Track(*options.out_curve);
    std::ostringstream csv;
    csv << "t,emp_risk,surrogate_risk,excess_risk,bound\n";
    for (std::size_t t = 0; t < risks.size(); ++t) {
      csv << t << ',' << FormatDouble(risks[t]) << ',' << FormatDouble(surrogates[t])
          << ',' << FormatDouble(risks[t] - r_star) << ','
          << FormatDouble(t == 0 ? delta0 : bound[t - 1]) << '\n';
    }
    WriteFile(*options.out_curve, csv.str());
    guard.Commit();
  }
}

// --- sweep -------------------------------------------------------------------

std::vector<SweepRow> RunSweep(const SweepOptions& options, std::ostream& out) {
  if (options.metric != "validation-reward") {
    throw InvalidArgument("unsupported sweep metric '" + options.metric + "'");
  }
  const Grid grid = LoadGrid(options.grid);
  std::size_t total = 1;
  for (const auto& [key, values] : grid) total *= values.size();

  std::vector<std::size_t> picks(total);
  std::iota(picks.begin(), picks.end(), std::size_t{0});
  if (options.samples > 0 && options.samples < total) {
    Rng rng(DeriveSeed(options.config.seed, 0x5eed));
    rng.Shuffle(std::span<std::size_t>(picks));
    picks.resize(options.samples);
    std::sort(picks.begin(), picks.end());
  }
  std::vector<RunConfig> configs;
  for (std::size_t pick : picks) {
    RunConfig c = options.config;
    std::size_t rest = pick;
    for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
      c.Set(it->first, it->second[rest % it->second.size()]);
      rest /= it->second.size();
    }
    c.ToBoostConfig();
    configs.push_back(std::move(c));
  }

  const SupervisedDataset data = ReadSupervisedCsv(options.data, options.config.ToTask());
  const auto trials = static_cast<std::size_t>(options.config.trials);

  // Simulated trials depend only on the simulation keys; share them.
  auto sim_key = [](const RunConfig& c) {
    std::string key;
    for (const char* k : {"epsilon", "logging_frac", "l2_strength", "logging_epochs",
                          "test_frac", "validation_frac", "task", "groups", "seed"}) {
      key += c.Get(k) + "|";
    }
    return key;
  };
  std::map<std::string, std::size_t> sim_index;
  std::vector<const RunConfig*> sim_configs;
  std::vector<std::size_t> config_sim(configs.size());
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const auto [it, inserted] = sim_index.emplace(sim_key(configs[c]), sim_configs.size());
    if (inserted) sim_configs.push_back(&configs[c]);
    config_sim[c] = it->second;
  }
  std::vector<Trial> sims(sim_configs.size() * trials);
  ParallelFor(sims.size(), options.jobs, [&](std::size_t s) {
    const RunConfig& c = *sim_configs[s / trials];
    sims[s] = MakeTrial(data, c.ToRewardSpec(), c.ToTrialConfig(), c.seed, s % trials);
  });

  std::vector<double> val(configs.size() * trials);
  std::vector<double> test(configs.size() * trials);
  ParallelFor(val.size(), options.jobs, [&](std::size_t job) {
    const std::size_t c = job / trials;
    const Trial& trial = sims[config_sim[c] * trials + job % trials];
    const RewardSpec spec = configs[c].ToRewardSpec();
    const TrainResult result = TrainOn(trial.log, configs[c]);
    const SoftmaxPolicy policy = SoftmaxPolicy::Argmax(result.ensemble);
    val[job] = GroundTruthReward(policy, trial.validation, spec).value;
    test[job] = GroundTruthReward(policy, trial.test, spec).value;
  });

  std::vector<SweepRow> rows;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const auto first = static_cast<std::ptrdiff_t>(c * trials);
    const auto last = first + static_cast<std::ptrdiff_t>(trials);
    const auto [mean_val, std_val] =
        MeanStd(std::vector<double>(val.begin() + first, val.begin() + last));
    const double mean_test =
        MeanStd(std::vector<double>(test.begin() + first, test.begin() + last)).first;
    rows.push_back({configs[c], mean_val, std_val, mean_test});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.mean_validation > b.mean_validation;
  });

  std::ostringstream csv;
  csv << "rank";
  for (const auto& [key, values] : grid) csv << ',' << key;
  csv << ",mean_validation_reward,std_validation_reward,mean_test_reward,trials\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    csv << r + 1;
    for (const auto& [key, values] : grid) csv << ',' << rows[r].config.Get(key);
    csv << ',' << FormatDouble(rows[r].mean_validation) << ','
        << FormatDouble(rows[r].std_validation) << ','
        << FormatDouble(rows[r].mean_test) << ',' << trials << '\n';
  }

  OutputGuard guard;
  guard.Track(options.out);
  WriteFile(options.out, csv.str());
  if (options.out_best) {
    guard.Track(*options.out_best);
    WriteFile(*options.out_best, rows.front().config.ToJson());
  }
  guard.Commit();

  out << "configurations=" << rows.size() << " trials=" << trials << '\n';
  out << "best mean_validation_reward=" << FormatDouble(rows.front().mean_validation)
      << " mean_test_reward=" << FormatDouble(rows.front().mean_test) << '\n';
  for (const auto& [key, values] : grid) {
    out << "best " << key << '=' << rows.front().config.Get(key) << '\n';
  }
  return rows;
}

}  // namespace bopl::cli
