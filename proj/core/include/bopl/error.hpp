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

#ifndef BOPL_ERROR_HPP_
#define BOPL_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace bopl {

// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated (nonpositive propensity,
// out-of-range action, invalid hyperparameter, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Feature vectors, score vectors or action counts disagree in size.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// The data cannot support the requested computation: all rewards zero,
// SNIPS with zero total importance weight, a base predictor that vanishes
// on every weighted context, ...
class DegenerateData : public Error {
 public:
  using Error::Error;
};

// Malformed or unsupported file contents.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bopl

#endif  // BOPL_ERROR_HPP_
