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

#ifndef BOPL_NUMERIC_HPP_
#define BOPL_NUMERIC_HPP_

#include <span>
#include <string>
#include <string_view>

namespace bopl {

// Sum with a fixed pairwise reduction tree: blocks of at most 8 terms are
// added left to right, larger ranges are split at the midpoint. The order
// depends only on the length, so results are bit-stable however the caller
// schedules the work.
double PairwiseSum(std::span<const double> values);

// Shortest decimal representation that parses back to the same double.
std::string FormatDouble(double value);

// Parses a full decimal string (also "inf", "-inf", "nan"). Throws
// FormatError on trailing garbage or an empty field.
double ParseDouble(std::string_view text);

}  // namespace bopl

#endif  // BOPL_NUMERIC_HPP_
