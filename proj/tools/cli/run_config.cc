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

#include "cli/run_config.hpp"

#include <charconv>
#include <functional>
#include <limits>
#include <type_traits>

#include "bopl/error.hpp"
#include "bopl/numeric.hpp"
#include "json.hpp"

namespace bopl::cli {
namespace {

using Json = nlohmann::ordered_json;

template <typename T>
T ParseIntegral(std::string_view key, std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw InvalidArgument("config key '" + std::string(key) +
                          "' expects an integer, got '" + std::string(text) + "'");
  }
  return value;
}

double ParseReal(std::string_view key, std::string_view text) {
  try {
    return ParseDouble(text);
  } catch (const FormatError&) {
    throw InvalidArgument("config key '" + std::string(key) +
                          "' expects a number, got '" + std::string(text) + "'");
  }
}

struct Field {
  std::string key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
  std::function<Json(const RunConfig&)> to_json;
};

template <typename T>
Field MakeField(const char* key, T RunConfig::*member) {
  Field f;
  f.key = key;
  if constexpr (std::is_same_v<T, std::string>) {
    f.set = [member](RunConfig& c, std::string_view v) { c.*member = std::string(v); };
    f.get = [member](const RunConfig& c) { return c.*member; };
    f.to_json = [member](const RunConfig& c) { return Json(c.*member); };
  } else if constexpr (std::is_same_v<T, bool>) {
    f.set = [member, key](RunConfig& c, std::string_view v) {
      if (v == "true" || v == "1") {
        c.*member = true;
      } else if (v == "false" || v == "0") {
        c.*member = false;
      } else {
        throw InvalidArgument("config key '" + std::string(key) +
                              "' expects true or false");
      }
    };
    f.get = [member](const RunConfig& c) {
      return std::string(c.*member ? "true" : "false");
    };
    f.to_json = [member](const RunConfig& c) { return Json(c.*member); };
  } else if constexpr (std::is_same_v<T, double>) {
    f.set = [member, key](RunConfig& c, std::string_view v) {
      c.*member = ParseReal(key, v);
    };
    f.get = [member](const RunConfig& c) { return FormatDouble(c.*member); };
    f.to_json = [member](const RunConfig& c) { return Json(c.*member); };
  } else if constexpr (std::is_same_v<T, std::optional<double>>) {
    f.set = [member, key](RunConfig& c, std::string_view v) {
      if (v == "null" || v.empty()) {
        c.*member = std::nullopt;
      } else {
        c.*member = ParseReal(key, v);
      }
    };
    f.get = [member](const RunConfig& c) {
      return c.*member ? FormatDouble(*(c.*member)) : std::string("null");
    };
    f.to_json = [member](const RunConfig& c) {
      return c.*member ? Json(*(c.*member)) : Json(nullptr);
    };
  } else {
    static_assert(std::is_integral_v<T>);
    f.set = [member, key](RunConfig& c, std::string_view v) {
      c.*member = ParseIntegral<T>(key, v);
    };
    f.get = [member](const RunConfig& c) { return std::to_string(c.*member); };
    f.to_json = [member](const RunConfig& c) { return Json(c.*member); };
  }
  return f;
}

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = {
      MakeField("algorithm", &RunConfig::algorithm),
      MakeField("base", &RunConfig::base),
      MakeField("rounds", &RunConfig::rounds),
      MakeField("omega", &RunConfig::omega),
      MakeField("reward_translation", &RunConfig::reward_translation),
      MakeField("max_depth", &RunConfig::max_depth),
      MakeField("min_child_weight", &RunConfig::min_child_weight),
      MakeField("reg_lambda", &RunConfig::reg_lambda),
      MakeField("shrinkage", &RunConfig::shrinkage),
      MakeField("epsilon", &RunConfig::epsilon),
      MakeField("logging_frac", &RunConfig::logging_frac),
      MakeField("seed", &RunConfig::seed),
      MakeField("trials", &RunConfig::trials),
      MakeField("clip_cap", &RunConfig::clip_cap),
      MakeField("estimator", &RunConfig::estimator),
      MakeField("task", &RunConfig::task),
      MakeField("groups", &RunConfig::groups),
      MakeField("l2_strength", &RunConfig::l2_strength),
      MakeField("logging_epochs", &RunConfig::logging_epochs),
      MakeField("test_frac", &RunConfig::test_frac),
      MakeField("validation_frac", &RunConfig::validation_frac),
      MakeField("patience", &RunConfig::patience),
      MakeField("rescale", &RunConfig::rescale),
      MakeField("stop_threshold", &RunConfig::stop_threshold),
  };
  return fields;
}

const Field& FindField(std::string_view key) {
  for (const Field& f : Fields()) {
    if (f.key == key) return f;
  }
  throw InvalidArgument("unknown config key '" + std::string(key) + "'");
}

std::string JsonValueText(const Json& value, const std::string& key) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_null()) return "null";
  if (value.is_number_integer()) return value.dump();
  if (value.is_number_float()) return FormatDouble(value.get<double>());
  throw FormatError("config key '" + key + "' must be a scalar");
}

}  // namespace

const std::vector<std::string>& RunConfig::Keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const Field& f : Fields()) out.push_back(f.key);
    return out;
  }();
  return keys;
}

void RunConfig::Set(std::string_view key, std::string_view value) {
  FindField(key).set(*this, value);
}

std::string RunConfig::Get(std::string_view key) const {
  return FindField(key).get(*this);
}

void RunConfig::MergeJson(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    try {
      Set(key, JsonValueText(value, key));
    } catch (const InvalidArgument& e) {
      throw FormatError(std::string("config: ") + e.what());
    }
  }
}

std::string RunConfig::ToJson() const {
  Json doc = Json::object();
  for (const Field& f : Fields()) doc[f.key] = f.to_json(*this);
  return doc.dump(2) + "\n";
}

BoostConfig RunConfig::ToBoostConfig() const {
  BoostConfig c;
  c.algorithm = ParseAlgorithm(algorithm);
  c.base = ParseBaseKind(base);
  c.rounds = rounds;
  c.omega = omega;
  c.reward_translation = reward_translation;
  c.tree.max_depth = max_depth;
  c.tree.min_child_weight = min_child_weight;
  c.tree.reg_lambda = reg_lambda;
  c.shrinkage = shrinkage;
  c.clip_cap = clip_cap;
  c.patience = patience;
  c.rescale = rescale;
  c.stop_threshold = stop_threshold;
  c.Validate();
  return c;
}

TrialConfig RunConfig::ToTrialConfig() const {
  TrialConfig c;
  c.test_frac = test_frac;
  c.validation_frac = validation_frac;
  c.logging_frac = logging_frac;
  c.logging.l2_strength = l2_strength;
  c.logging.max_epochs = logging_epochs;
  c.logging.epsilon = epsilon;
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  return c;
}

Task RunConfig::ToTask() const { return ParseTask(task); }

RewardSpec RunConfig::ToRewardSpec() const {
  return RewardSpec::Named(groups, ToTask());
}

Metadata RunConfig::ToMetadata() const {
  Metadata meta;
  for (const Field& f : Fields()) meta["config." + f.key] = f.get(*this);
  return meta;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  RunConfig config;
  try {
    config.MergeJson(ReadFile(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return config;
}

Grid LoadGrid(const std::filesystem::path& path) {
  Json doc;
  try {
    doc = Json::parse(ReadFile(path));
  } catch (const Json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw FormatError(path.string() + ": grid must be an object");
  Grid grid;
  for (const auto& [key, values] : doc.items()) {
    FindField(key);
    if (!values.is_array() || values.empty()) {
      throw FormatError(path.string() + ": grid entry '" + key +
                        "' must be a nonempty array");
    }
    for (const Json& v : values) grid[key].push_back(JsonValueText(v, key));
  }
  return grid;
}

}  // namespace bopl::cli
