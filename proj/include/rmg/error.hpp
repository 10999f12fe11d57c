// Copyright 2026 The rmg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RMG_ERROR_HPP_
#define RMG_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace rmg {

enum class ErrorKind {
  kNonStochasticRow,
  kRewardOutOfRange,
  kBadInitialDist,
  kBadSigma,
  kBadDistribution,
  kNonFiniteEntry,
  kDegenerate,
  kSizeMismatch,
  kShapeMismatch,
  kBadDelta,
  kIndexOutOfBounds,
  kBadParams,
  kHTooSmall,
  kNonPositiveValue,
  kTooFewPoints,
  kStageSolverFailure,
  kInvariantViolation,
  kIo,
  kParse,
};

std::string_view error_kind_name(ErrorKind kind);

// Every failure raised by the library carries a machine-readable kind; the
// message names the offending index where there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Residual-carrying failure from a multi-player stage solver.
class StageSolverError : public Error {
 public:
  StageSolverError(const std::string& message, double residual)
      : Error(ErrorKind::kStageSolverFailure, message), residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace rmg

#endif  // RMG_ERROR_HPP_
