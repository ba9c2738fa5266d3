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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string_view>
#include <utility>
#include <vector>

#include "bopl/error.hpp"
#include "bopl/numeric.hpp"
#include "json.hpp"

namespace bopl {
namespace {

using Json = nlohmann::ordered_json;

// Line-oriented reader that tracks line numbers, strips '\r' and skips
// blank lines.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool Next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    if (in_.bad()) throw IoError("read failure");
    return false;
  }

  [[noreturn]] void Fail(const std::string& message) const {
    throw FormatError("line " + std::to_string(number_) + ": " + message);
  }

  std::size_t number() const { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

std::vector<std::string_view> SplitFields(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

long long ParseInteger(std::string_view text, const LineReader& reader,
                       const char* what) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    reader.Fail(std::string("invalid ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

double ParseReal(std::string_view text, const LineReader& reader, const char* what) {
  try {
    return ParseDouble(text);
  } catch (const FormatError&) {
    reader.Fail(std::string("invalid ") + what + " '" + std::string(text) + "'");
  }
}

// Reads `# key=value` lines up to the header, which is returned in `header`.
Metadata ReadPreamble(LineReader& reader, std::string& header) {
  Metadata meta;
  std::string line;
  while (reader.Next(line)) {
    if (line[0] != '#') {
      header = line;
      return meta;
    }
    std::string_view body(line);
    body.remove_prefix(1);
    while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos) reader.Fail("expected '# key=value'");
    meta[std::string(body.substr(0, eq))] = std::string(body.substr(eq + 1));
  }
  reader.Fail("missing header row");
}

// Checks that `fields` from position `first` are f0, f1, ... and returns
// their count.
int FeatureColumns(const std::vector<std::string_view>& fields, std::size_t first,
                   const LineReader& reader) {
  for (std::size_t j = first; j < fields.size(); ++j) {
    if (fields[j] != "f" + std::to_string(j - first)) {
      reader.Fail("expected column f" + std::to_string(j - first) + ", got '" +
                  std::string(fields[j]) + "'");
    }
  }
  return static_cast<int>(fields.size() - first);
}

void WriteFeatureHeader(std::ostream& out, int dim) {
  for (int j = 0; j < dim; ++j) out << ",f" << j;
  out << '\n';
}

void WriteFeatures(std::ostream& out, const std::vector<double>& features) {
  for (double x : features) out << ',' << FormatDouble(x);
  out << '\n';
}

int PreambleCount(const Metadata& meta, const char* key, const LineReader& reader) {
  const auto it = meta.find(key);
  if (it == meta.end()) return -1;
  const long long v = ParseInteger(it->second, reader, key);
  if (v < 1 || v > std::numeric_limits<int>::max()) {
    reader.Fail(std::string(key) + " must be a positive integer");
  }
  return static_cast<int>(v);
}

std::ifstream OpenInput(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

template <typename Fn>
void WriteTo(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  fn(out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string OptionalField(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : std::string();
}

std::string_view KindName(PredictorKind kind) {
  return kind == PredictorKind::kRegressionTree ? "regression_tree"
                                                : "classification_tree";
}

PredictorKind ParseKind(const std::string& name) {
  if (name == "regression_tree") return PredictorKind::kRegressionTree;
  if (name == "classification_tree") return PredictorKind::kClassificationTree;
  throw FormatError("unknown predictor kind '" + name + "'");
}

Json DoubleToJson(double v) {
  if (std::isfinite(v)) return v;
  return FormatDouble(v);
}

double JsonToDouble(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return ParseDouble(j.get<std::string>());
  throw FormatError("expected a number");
}

}  // namespace

// --- Supervised CSV ----------------------------------------------------------

SupervisedDataset ReadSupervisedCsv(std::istream& in, std::optional<Task> task) {
  LineReader reader(in);
  std::string header;
  const Metadata meta = ReadPreamble(reader, header);
  const auto head = SplitFields(header, ',');
  bool multilabel_syntax = false;
  if (head[0] == "labels") {
    multilabel_syntax = true;
  } else if (head[0] != "label") {
    reader.Fail("first column must be 'label' or 'labels'");
  }
  SupervisedDataset data;
  data.task = task.value_or(multilabel_syntax ? Task::kMultilabel : Task::kMulticlass);
  data.feature_dim = FeatureColumns(head, 1, reader);
  const int declared = PreambleCount(meta, "num_classes", reader);

  int max_label = -1;
  std::string line;
  while (reader.Next(line)) {
    const auto fields = SplitFields(line, ',');
    if (static_cast<int>(fields.size()) != data.feature_dim + 1) {
      reader.Fail("expected " + std::to_string(data.feature_dim + 1) +
                  " fields, got " + std::to_string(fields.size()));
    }
    SupervisedExample e;
    if (multilabel_syntax) {
      if (!fields[0].empty()) {
        for (std::string_view t : SplitFields(fields[0], ';')) {
          e.labels.push_back(static_cast<int>(ParseInteger(t, reader, "label")));
        }
      }
    } else {
      e.labels.push_back(static_cast<int>(ParseInteger(fields[0], reader, "label")));
    }
    for (int label : e.labels) {
      if (label < 0) reader.Fail("negative label");
      if (declared > 0 && label >= declared) reader.Fail("label exceeds num_classes");
      max_label = std::max(max_label, label);
    }
    if (!std::is_sorted(e.labels.begin(), e.labels.end()) ||
        std::adjacent_find(e.labels.begin(), e.labels.end()) != e.labels.end()) {
      reader.Fail("labels must be sorted and distinct");
    }
    if (data.task == Task::kMulticlass && e.labels.size() != 1) {
      reader.Fail("multiclass rows need exactly one label");
    }
    e.features.reserve(fields.size() - 1);
    for (std::size_t j = 1; j < fields.size(); ++j) {
      const double x = ParseReal(fields[j], reader, "feature");
      if (!std::isfinite(x)) reader.Fail("non-finite feature");
      e.features.push_back(x);
    }
    data.examples.push_back(std::move(e));
  }
  data.num_classes = declared > 0 ? declared : max_label + 1;
  if (data.num_classes < 1) throw FormatError("cannot infer the class count");
  data.Validate();
  return data;
}

SupervisedDataset ReadSupervisedCsv(const std::filesystem::path& path,
                                    std::optional<Task> task) {
  std::ifstream in = OpenInput(path);
  try {
    return ReadSupervisedCsv(in, task);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void WriteSupervisedCsv(std::ostream& out, const SupervisedDataset& data) {
  data.Validate();
  const bool multilabel = data.task == Task::kMultilabel;
  out << "# num_classes=" << data.num_classes << '\n';
  out << (multilabel ? "labels" : "label");
  WriteFeatureHeader(out, data.feature_dim);
  for (const SupervisedExample& e : data.examples) {
    for (std::size_t k = 0; k < e.labels.size(); ++k) {
      if (k > 0) out << ';';
      out << e.labels[k];
    }
    WriteFeatures(out, e.features);
  }
}

void WriteSupervisedCsv(const std::filesystem::path& path,
                        const SupervisedDataset& data) {
  WriteTo(path, [&](std::ostream& out) { WriteSupervisedCsv(out, data); });
}

// --- Bandit log CSV ----------------------------------------------------------

BanditDataset ReadBanditLog(std::istream& in) {
  LineReader reader(in);
  std::string header;
  const Metadata meta = ReadPreamble(reader, header);
  const auto head = SplitFields(header, ',');
  if (head.size() < 3 || head[0] != "action" || head[1] != "propensity" ||
      head[2] != "reward") {
    reader.Fail("header must start with action,propensity,reward");
  }
  const int dim = FeatureColumns(head, 3, reader);
  const int declared = PreambleCount(meta, "num_actions", reader);

  std::vector<LoggedExample> examples;
  int max_action = -1;
  std::string line;
  while (reader.Next(line)) {
    const auto fields = SplitFields(line, ',');
    if (static_cast<int>(fields.size()) != dim + 3) {
      reader.Fail("expected " + std::to_string(dim + 3) + " fields, got " +
                  std::to_string(fields.size()));
    }
    LoggedExample e;
    const long long action = ParseInteger(fields[0], reader, "action");
    if (action < 0 || (declared > 0 && action >= declared)) {
      reader.Fail("action " + std::to_string(action) + " out of range");
    }
    e.action = static_cast<int>(action);
    e.propensity = ParseReal(fields[1], reader, "propensity");
    if (!(e.propensity > 0.0 && e.propensity <= 1.0)) {
      reader.Fail("propensity must lie in (0, 1]");
    }
    e.reward = ParseReal(fields[2], reader, "reward");
    if (!std::isfinite(e.reward)) reader.Fail("non-finite reward");
    e.features.reserve(static_cast<std::size_t>(dim));
    for (std::size_t j = 3; j < fields.size(); ++j) {
      const double x = ParseReal(fields[j], reader, "feature");
      if (!std::isfinite(x)) reader.Fail("non-finite feature");
      e.features.push_back(x);
    }
    max_action = std::max(max_action, e.action);
    examples.push_back(std::move(e));
  }
  const int num_actions = declared > 0 ? declared : max_action + 1;
  if (num_actions < 1) throw FormatError("cannot infer the action count");
  return BanditDataset(num_actions, dim, std::move(examples));
}

BanditDataset ReadBanditLog(const std::filesystem::path& path) {
  std::ifstream in = OpenInput(path);
  try {
    return ReadBanditLog(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void WriteBanditLog(std::ostream& out, const BanditDataset& data) {
  out << "# num_actions=" << data.num_actions() << '\n';
  out << "action,propensity,reward";
  WriteFeatureHeader(out, data.feature_dim());
  for (const LoggedExample& e : data) {
    out << e.action << ',' << FormatDouble(e.propensity) << ','
        << FormatDouble(e.reward);
    WriteFeatures(out, e.features);
  }
}

void WriteBanditLog(const std::filesystem::path& path, const BanditDataset& data) {
  WriteTo(path, [&](std::ostream& out) { WriteBanditLog(out, data); });
}

// --- Model JSON --------------------------------------------------------------

std::string ModelToJson(const Model& model) {
  Json doc;
  doc["format"] = "bopl-model";
  doc["format_version"] = kModelFormatVersion;
  doc["num_actions"] = model.ensemble.num_actions();
  doc["feature_dim"] = model.ensemble.feature_dim();
  doc["beta"] = DoubleToJson(model.beta);
  Json members = Json::array();
  for (const EnsembleMember& m : model.ensemble.members()) {
    Json nodes = Json::array();
    for (const TreeNode& node : m.predictor.tree().nodes()) {
      Json jn;
      jn["is_leaf"] = node.is_leaf();
      if (node.is_leaf()) {
        jn["value"] = node.value;
      } else {
        jn["feature"] = node.feature;
        jn["threshold"] = node.threshold;
        jn["left"] = node.left;
        jn["right"] = node.right;
      }
      nodes.push_back(std::move(jn));
    }
    Json jm;
    jm["alpha"] = m.alpha;
    jm["kind"] = KindName(m.predictor.kind());
    jm["scale"] = m.predictor.scale();
    jm["nodes"] = std::move(nodes);
    members.push_back(std::move(jm));
  }
  doc["members"] = std::move(members);
  Json meta = Json::object();
  for (const auto& [key, value] : model.metadata) meta[key] = value;
  doc["metadata"] = std::move(meta);
  return doc.dump(1) + "\n";
}

Model ModelFromJson(const std::string& text) {
  try {
    const Json doc = Json::parse(text);
    if (doc.at("format").get<std::string>() != "bopl-model") {
      throw FormatError("not a bopl model document");
    }
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw FormatError("unsupported model format version " +
                        std::to_string(version));
    }
    Model model{Ensemble(doc.at("num_actions").get<int>(),
                         doc.at("feature_dim").get<int>()),
                JsonToDouble(doc.at("beta")),
                {}};
    if (!(model.beta >= 0.0)) throw FormatError("beta must be nonnegative");
    for (const Json& jm : doc.at("members")) {
      std::vector<TreeNode> nodes;
      for (const Json& jn : jm.at("nodes")) {
        TreeNode node;
        if (jn.at("is_leaf").get<bool>()) {
          node.value = jn.at("value").get<double>();
        } else {
          node.feature = jn.at("feature").get<std::int32_t>();
          if (node.feature < 0) throw FormatError("negative split feature");
          node.threshold = jn.at("threshold").get<double>();
          node.left = jn.at("left").get<std::int32_t>();
          node.right = jn.at("right").get<std::int32_t>();
        }
        nodes.push_back(node);
      }
      model.ensemble.Add(jm.at("alpha").get<double>(),
                         Predictor(ParseKind(jm.at("kind").get<std::string>()),
                                   Tree(std::move(nodes)),
                                   jm.at("scale").get<double>()));
    }
    for (const auto& [key, value] : doc.at("metadata").items()) {
      model.metadata[key] = value.get<std::string>();
    }
    return model;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("model document: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("model document: ") + e.what());
  }
}

Model ReadModel(const std::filesystem::path& path) {
  try {
    return ModelFromJson(ReadFile(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void WriteModel(const std::filesystem::path& path, const Model& model) {
  WriteFile(path, ModelToJson(model));
}

// --- Trace CSV ---------------------------------------------------------------

namespace {

constexpr std::string_view kTraceHeader =
    "t,alpha,grad_term,grad_norm,emp_risk,surrogate_risk,snips_train,bound,"
    "omega_effective,error_rate,validation_reward";

}  // namespace

void WriteTrace(std::ostream& out, const TrainTrace& trace,
                const Metadata& metadata) {
  out << "# algorithm=" << AlgorithmName(trace.algorithm) << '\n'
      << "# omega=" << FormatDouble(trace.omega) << '\n'
      << "# r_star=" << FormatDouble(trace.r_star) << '\n'
      << "# delta0=" << FormatDouble(trace.delta0) << '\n'
      << "# initial_risk=" << FormatDouble(trace.initial_risk) << '\n'
      << "# initial_surrogate_risk=" << FormatDouble(trace.initial_surrogate_risk)
      << '\n'
      << "# stop_reason=" << StopReasonName(trace.stop_reason) << '\n'
      << "# kept_rounds=" << trace.kept_rounds << '\n';
  for (const auto& [key, value] : metadata) {
    if (key.find('=') != std::string::npos || value.find('\n') != std::string::npos) {
      throw InvalidArgument("trace metadata must be single-line key=value pairs");
    }
    out << "# meta." << key << '=' << value << '\n';
  }
  out << kTraceHeader << '\n';
  for (const RoundStats& r : trace.rounds) {
    out << r.round << ',' << FormatDouble(r.alpha) << ',' << FormatDouble(r.grad_term)
        << ',' << FormatDouble(r.grad_norm) << ',' << FormatDouble(r.emp_risk) << ','
        << OptionalField(r.surrogate_risk) << ',' << FormatDouble(r.snips_train)
        << ',' << FormatDouble(r.bound) << ',' << FormatDouble(r.omega_effective)
        << ',' << OptionalField(r.error_rate) << ','
        << OptionalField(r.validation_reward) << '\n';
  }
}

void WriteTrace(const std::filesystem::path& path, const TrainTrace& trace,
                const Metadata& metadata) {
  WriteTo(path, [&](std::ostream& out) { WriteTrace(out, trace, metadata); });
}

TraceFile ReadTrace(std::istream& in) {
  LineReader reader(in);
  std::string header;
  const Metadata pre = ReadPreamble(reader, header);
  if (header != kTraceHeader) reader.Fail("unexpected trace header");

  TraceFile file;
  TrainTrace& trace = file.trace;
  auto get = [&](const char* key) -> const std::string& {
    const auto it = pre.find(key);
    if (it == pre.end()) reader.Fail(std::string("missing '# ") + key + "='");
    return it->second;
  };
  try {
    trace.algorithm = ParseAlgorithm(get("algorithm"));
    trace.stop_reason = ParseStopReason(get("stop_reason"));
  } catch (const InvalidArgument& e) {
    reader.Fail(e.what());
  }
  trace.omega = ParseReal(get("omega"), reader, "omega");
  trace.r_star = ParseReal(get("r_star"), reader, "r_star");
  trace.delta0 = ParseReal(get("delta0"), reader, "delta0");
  trace.initial_risk = ParseReal(get("initial_risk"), reader, "initial_risk");
  trace.initial_surrogate_risk =
      ParseReal(get("initial_surrogate_risk"), reader, "initial_surrogate_risk");
  trace.kept_rounds =
      static_cast<int>(ParseInteger(get("kept_rounds"), reader, "kept_rounds"));
  for (const auto& [key, value] : pre) {
    if (key.rfind("meta.", 0) == 0) file.metadata[key.substr(5)] = value;
  }

  auto optional = [&](std::string_view field, const char* what) {
    return field.empty() ? std::optional<double>()
                         : std::optional<double>(ParseReal(field, reader, what));
  };
  std::string line;
  while (reader.Next(line)) {
    const auto f = SplitFields(line, ',');
    if (f.size() != 11) reader.Fail("expected 11 trace fields");
    RoundStats r;
    r.round = static_cast<int>(ParseInteger(f[0], reader, "round"));
    r.alpha = ParseReal(f[1], reader, "alpha");
    r.grad_term = ParseReal(f[2], reader, "grad_term");
    r.grad_norm = ParseReal(f[3], reader, "grad_norm");
    r.emp_risk = ParseReal(f[4], reader, "emp_risk");
    r.surrogate_risk = optional(f[5], "surrogate_risk");
    r.snips_train = ParseReal(f[6], reader, "snips_train");
    r.bound = ParseReal(f[7], reader, "bound");
    r.omega_effective = ParseReal(f[8], reader, "omega_effective");
    r.error_rate = optional(f[9], "error_rate");
    r.validation_reward = optional(f[10], "validation_reward");
    if (r.round != static_cast<int>(trace.rounds.size()) + 1) {
      reader.Fail("rounds must be numbered 1, 2, ...");
    }
    trace.rounds.push_back(std::move(r));
  }
  if (trace.kept_rounds < 0 ||
      trace.kept_rounds > static_cast<int>(trace.rounds.size())) {
    throw FormatError("kept_rounds exceeds the number of rounds");
  }
  return file;
}

TraceFile ReadTrace(const std::filesystem::path& path) {
  std::ifstream in = OpenInput(path);
  try {
    return ReadTrace(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

// --- Files -------------------------------------------------------------------

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in = OpenInput(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  return buffer.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& contents) {
  WriteTo(path, [&](std::ostream& out) { out << contents; });
}

}  // namespace bopl
