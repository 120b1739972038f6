// Copyright 2026 The Clausefair Authors.
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

#include "clausefair/error.hpp"

namespace clausefair {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::InsufficientClass: return "InsufficientClass";
    case ErrorCode::Conflict: return "ConflictError";
    case ErrorCode::InvalidSplitConfig: return "InvalidSplitConfig";
    case ErrorCode::PoolTooSmall: return "PoolTooSmall";
    case ErrorCode::MissingAnnotations: return "MissingAnnotations";
    case ErrorCode::NotPending: return "NotPending";
    case ErrorCode::SelfAdjudication: return "SelfAdjudication";
    case ErrorCode::DuplicateAnnotation: return "DuplicateAnnotation";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::IncompleteAnswers: return "IncompleteAnswers";
    case ErrorCode::MissingClass: return "MissingClass";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::InvalidCheckpoint: return "InvalidCheckpoint";
    case ErrorCode::UnknownBackend: return "UnknownBackend";
    case ErrorCode::UnverifiedSynthetic: return "UnverifiedSynthetic";
    case ErrorCode::InvalidThreshold: return "InvalidThreshold";
    case ErrorCode::MissingInput: return "MissingInput";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::TransportError: return "TransportError";
    case ErrorCode::DuplicateReview: return "DuplicateReview";
    case ErrorCode::InvalidTemplate: return "InvalidTemplate";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::Io: return "IoError";
  }
  return "UnknownError";
}

ExitCode exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidSplitConfig:
    case ErrorCode::InvalidThreshold:
      return ExitCode::Usage;
    case ErrorCode::TransportError:
      return ExitCode::External;
    default:
      return ExitCode::Data;
  }
}

}  // namespace clausefair
