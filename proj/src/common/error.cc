// Copyright 2026 The measkit Authors.
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

#include "measkit/error.h"

namespace measkit {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedNumber: return "MalformedNumber";
    case ErrorCode::kExponentOverflow: return "ExponentOverflow";
    case ErrorCode::kUnknownAtom: return "UnknownAtom";
    case ErrorCode::kUnknownPrefix: return "UnknownPrefix";
    case ErrorCode::kMalformedUnit: return "MalformedUnit";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kMalformedInventory: return "MalformedInventory";
    case ErrorCode::kEmptyEntityTable: return "EmptyEntityTable";
    case ErrorCode::kMalformedEntityTable: return "MalformedEntityTable";
    case ErrorCode::kIncompatibleSet: return "IncompatibleSet";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kGenerationExhausted: return "GenerationExhausted";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kNoMask: return "NoMask";
    case ErrorCode::kMultipleMasks: return "MultipleMasks";
    case ErrorCode::kSequenceTooLong: return "SequenceTooLong";
    case ErrorCode::kUnknownCandidate: return "UnknownCandidate";
    case ErrorCode::kDivergence: return "Divergence";
    case ErrorCode::kBadCheckpoint: return "BadCheckpoint";
    case ErrorCode::kVerificationFailed: return "VerificationFailed";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

}  // namespace measkit
