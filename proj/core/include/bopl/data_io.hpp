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

// Readers and writers for the four file formats: supervised CSV, bandit log
// CSV, model JSON and training trace CSV. Reals are written as the shortest
// decimal that parses back to the same double, so every round trip is
// lossless. Readers reject invariant violations with FormatError (line
// numbers included) instead of repairing them. See docs/formats.md.

#ifndef BOPL_DATA_IO_HPP_
#define BOPL_DATA_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "bopl/boosting.hpp"
#include "bopl/dataset.hpp"
#include "bopl/policy.hpp"
#include "bopl/supervised.hpp"

namespace bopl {

using Metadata = std::map<std::string, std::string>;

inline constexpr int kModelFormatVersion = 1;

struct Model {
  Ensemble ensemble;
  // Inverse temperature the ensemble was trained at.
  double beta = 1.0;
  Metadata metadata;

  SoftmaxPolicy Policy() const { return SoftmaxPolicy(ensemble, beta); }
  SoftmaxPolicy ArgmaxPolicy() const { return SoftmaxPolicy::Argmax(ensemble); }
};

struct TraceFile {
  TrainTrace trace;
  Metadata metadata;
};

// Supervised CSV. Header `label,f0,...` (one class index per row) or
// `labels,f0,...` (`;`-separated class indices, possibly empty), optionally
// preceded by a `# num_classes=K` line. Without it the class count is the
// largest label plus one. `task` overrides the header's implied task.
SupervisedDataset ReadSupervisedCsv(std::istream& in,
                                    std::optional<Task> task = {});
SupervisedDataset ReadSupervisedCsv(const std::filesystem::path& path,
                                    std::optional<Task> task = {});
void WriteSupervisedCsv(std::ostream& out, const SupervisedDataset& data);
void WriteSupervisedCsv(const std::filesystem::path& path,
                        const SupervisedDataset& data);

// Bandit log CSV: `# num_actions=K` then `action,propensity,reward,f0,...`.
BanditDataset ReadBanditLog(std::istream& in);
BanditDataset ReadBanditLog(const std::filesystem::path& path);
void WriteBanditLog(std::ostream& out, const BanditDataset& data);
void WriteBanditLog(const std::filesystem::path& path, const BanditDataset& data);

// Model JSON document.
std::string ModelToJson(const Model& model);
Model ModelFromJson(const std::string& text);
Model ReadModel(const std::filesystem::path& path);
void WriteModel(const std::filesystem::path& path, const Model& model);

// Trace CSV: `# key=value` lines (trace summary, then metadata), a header
// and one row per completed round. Per-example switch vectors are not
// stored.
void WriteTrace(std::ostream& out, const TrainTrace& trace,
                const Metadata& metadata = {});
void WriteTrace(const std::filesystem::path& path, const TrainTrace& trace,
                const Metadata& metadata = {});
TraceFile ReadTrace(std::istream& in);
TraceFile ReadTrace(const std::filesystem::path& path);

// Whole-file helpers that throw IoError.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, const std::string& contents);

}  // namespace bopl

#endif  // BOPL_DATA_IO_HPP_
