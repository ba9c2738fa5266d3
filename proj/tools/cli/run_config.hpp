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

// Flat key/value run configuration shared by every subcommand. Loaded from a
// JSON object with exactly these keys (all optional), then overridden by
// command-line flags of the same name with '_' spelled '-'.

#ifndef BOPL_TOOLS_RUN_CONFIG_HPP_
#define BOPL_TOOLS_RUN_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bopl/boosting.hpp"
#include "bopl/data_io.hpp"
#include "bopl/simulation.hpp"
#include "bopl/supervised.hpp"

namespace bopl::cli {

struct RunConfig {
  std::string algorithm = "bopl";
  std::string base = "regression";
  int rounds = 100;
  double omega = 1.0;
  double reward_translation = 0.0;
  int max_depth = 6;
  double min_child_weight = 1.0;
  double reg_lambda = 0.0;
  double shrinkage = 1.0;
  double epsilon = 0.05;
  double logging_frac = 0.1;
  std::uint64_t seed = 0;
  int trials = 10;
  std::optional<double> clip_cap;
  std::string estimator = "truth";
  std::string task = "multiclass";
  std::string groups = "none";
  double l2_strength = 0.1;
  int logging_epochs = 1000;
  double test_frac = 0.2;
  double validation_frac = 0.2;
  int patience = 0;
  bool rescale = true;
  double stop_threshold = 1e-10;

  // Every key in file order.
  static const std::vector<std::string>& Keys();

  // Sets `key` from its textual form ("null" clears clip_cap). Throws
  // InvalidArgument on unknown keys or unparsable values.
  void Set(std::string_view key, std::string_view value);
  std::string Get(std::string_view key) const;

  // Applies a JSON object document. Throws FormatError on anything else.
  void MergeJson(const std::string& text);
  std::string ToJson() const;

  BoostConfig ToBoostConfig() const;
  TrialConfig ToTrialConfig() const;
  Task ToTask() const;
  RewardSpec ToRewardSpec() const;
  // "config.<key>" -> value for every key.
  Metadata ToMetadata() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig LoadRunConfig(const std::filesystem::path& path);

// A JSON object mapping config keys to arrays of candidate values, as the
// text each value would have on the command line.
using Grid = std::map<std::string, std::vector<std::string>>;
Grid LoadGrid(const std::filesystem::path& path);

}  // namespace bopl::cli

#endif  // BOPL_TOOLS_RUN_CONFIG_HPP_
