// Copyright 2026 The nrqc Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace nrqc {

/// Bad argument value (out-of-range parameter, non-unitary gate, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mismatched tensor extents or ranks.
class DimensionError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// A problem size exceeds a hard cap (dense oracle, reconstruction).
class SizeCapError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// Solver failure, non-finite data, or an invalid (e.g. all-zero) state.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the evolution loop when Tr(rho) falls below the configured floor.
class TraceFloorError : public NumericError {
 public:
  TraceFloorError(const std::string& what, std::size_t depth, double trace)
      : NumericError(what), depth_(depth), trace_(trace) {}
  std::size_t depth() const noexcept { return depth_; }
  double trace() const noexcept { return trace_; }

 private:
  std::size_t depth_;
  double trace_;
};

}  // namespace nrqc
