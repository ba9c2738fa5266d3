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

#ifndef BOPL_TESTS_ACCEPTANCE_CRITERIA_HPP_
#define BOPL_TESTS_ACCEPTANCE_CRITERIA_HPP_

#include <chrono>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace bopl::acceptance {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  // Wall-clock limit in seconds; 0 means none.
  double time_limit;
  std::function<Verdict()> run;
};

// Criteria that need no external data. `workdir` holds pipeline outputs.
std::vector<Criterion> CoreCriteria(const std::filesystem::path& workdir);

// Runs every criterion, prints one line each and returns the failure count.
int RunCriteria(const std::vector<Criterion>& criteria, std::ostream& out);

// Printf-style formatting of a short detail string.
std::string Detail(const char* format, ...);

}  // namespace bopl::acceptance

#endif  // BOPL_TESTS_ACCEPTANCE_CRITERIA_HPP_
