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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lfu {

// Numeric values are part of the C ABI (see lfu.h); append only.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kOverflow = 2,
  kAntipodalInput = 3,
  kRangeTooLarge = 4,
  kIndexOutOfRange = 5,
  kParse = 6,
  kPrimeTooLarge = 7,
  kIncompatible = 8,
  kAmbiguousLifts = 9,
  kPreconditionViolated = 10,
  kInsufficientPairs = 11,
  kNoCommonNeighbors = 12,
  kHypothesisFails = 13,
  kNoDenominatorInRange = 14,
  kNoQualifyingScale = 15,
  kDensityCollapse = 16,
  kConcentrationFailed = 17,
  kVinogradovFailed = 18,
  kNoAnchor = 19,
  kTooManyTuples = 20,
  kCutoffTooLarge = 21,
  kGateFailed = 22,
  kIo = 23,
  kConfig = 24,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Error(ErrorCode code, const std::string& message, std::string stage)
      : std::runtime_error(message), code_(code), stage_(std::move(stage)) {}

  ErrorCode code() const noexcept { return code_; }
  // Pipeline stage that raised the error, empty outside the pipeline.
  const std::string& stage() const noexcept { return stage_; }

 private:
  ErrorCode code_;
  std::string stage_;
};

}  // namespace lfu
