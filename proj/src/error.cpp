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

#include "rmg/error.hpp"

namespace rmg {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNonStochasticRow: return "NonStochasticRow";
    case ErrorKind::kRewardOutOfRange: return "RewardOutOfRange";
    case ErrorKind::kBadInitialDist: return "BadInitialDist";
    case ErrorKind::kBadSigma: return "BadSigma";
    case ErrorKind::kBadDistribution: return "BadDistribution";
    case ErrorKind::kNonFiniteEntry: return "NonFiniteEntry";
    case ErrorKind::kDegenerate: return "Degenerate";
    case ErrorKind::kSizeMismatch: return "SizeMismatch";
    case ErrorKind::kShapeMismatch: return "ShapeMismatch";
    case ErrorKind::kBadDelta: return "BadDelta";
    case ErrorKind::kIndexOutOfBounds: return "IndexOutOfBounds";
    case ErrorKind::kBadParams: return "BadParams";
    case ErrorKind::kHTooSmall: return "HTooSmall";
    case ErrorKind::kNonPositiveValue: return "NonPositiveValue";
    case ErrorKind::kTooFewPoints: return "TooFewPoints";
    case ErrorKind::kStageSolverFailure: return "StageSolverFailure";
    case ErrorKind::kInvariantViolation: return "InvariantViolation";
    case ErrorKind::kIo: return "IoError";
    case ErrorKind::kParse: return "ParseError";
  }
  return "Unknown";
}

}  // namespace rmg
