// Copyright 2026 The lfu Authors
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

#include "lfu/error.hpp"

namespace lfu {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kAntipodalInput: return "AntipodalInput";
    case ErrorCode::kRangeTooLarge: return "RangeTooLarge";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kPrimeTooLarge: return "PrimeTooLarge";
    case ErrorCode::kIncompatible: return "Incompatible";
    case ErrorCode::kAmbiguousLifts: return "AmbiguousLifts";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kInsufficientPairs: return "InsufficientPairs";
    case ErrorCode::kNoCommonNeighbors: return "NoCommonNeighbors";
    case ErrorCode::kHypothesisFails: return "HypothesisFails";
    case ErrorCode::kNoDenominatorInRange: return "NoDenominatorInRange";
    case ErrorCode::kNoQualifyingScale: return "NoQualifyingScale";
    case ErrorCode::kDensityCollapse: return "DensityCollapse";
    case ErrorCode::kConcentrationFailed: return "ConcentrationFailed";
    case ErrorCode::kVinogradovFailed: return "VinogradovFailed";
    case ErrorCode::kNoAnchor: return "NoAnchor";
    case ErrorCode::kTooManyTuples: return "TooManyTuples";
    case ErrorCode::kCutoffTooLarge: return "CutoffTooLarge";
    case ErrorCode::kGateFailed: return "GateFailed";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kConfig: return "Config";
  }
  return "Unknown";
}

}  // namespace lfu
