/*
* Copyright 2026 The ope-kit Authors.
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     https://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
* ============================================================================
*/
#ifndef OPEKIT_ERROR_H_
#define OPEKIT_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace opekit {

enum class ErrorCode {
  kEmptyInput,
  kTooFewPoints,
  kInvalidOrder,
  kInvalidArgument,
  kSingularSystem,
  kShapeMismatch,
  kZeroPropensity,
  kZeroWeightMass,
  kMissingPropensities,
  kParseError,
  kSchemaMismatch,
  kIoError,
  kSizeTooLarge,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type. The code
// lets callers (the CLI in particular) tell configuration problems apart from
// numerical or I/O failures.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kInvalidOrder: return "InvalidOrder";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kZeroPropensity: return "ZeroPropensity";
    case ErrorCode::kZeroWeightMass: return "ZeroWeightMass";
    case ErrorCode::kMissingPropensities: return "MissingPropensities";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kSizeTooLarge: return "SizeTooLarge";
  }
  return "Unknown";
}

}  // namespace opekit

#endif  // OPEKIT_ERROR_H_
