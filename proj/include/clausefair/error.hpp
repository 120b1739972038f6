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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace clausefair {

// Every failure surfaced by the library carries one of these codes. The CLI
// and the HTTP service map them onto exit codes and status codes.
enum class ErrorCode {
  // corpus
  EmptyDocument,
  InsufficientClass,
  Conflict,
  InvalidSplitConfig,
  // annotation
  PoolTooSmall,
  MissingAnnotations,
  NotPending,
  SelfAdjudication,
  DuplicateAnnotation,
  EmptyInput,
  IncompleteAnswers,
  // classifier
  MissingClass,
  EmptyTrainingSet,
  LengthMismatch,
  InvalidDistribution,
  InvalidCheckpoint,
  UnknownBackend,
  // selftrain
  UnverifiedSynthetic,
  InvalidThreshold,
  // llm
  MissingInput,
  ParseError,
  TransportError,
  DuplicateReview,
  InvalidTemplate,
  InvalidState,
  // workbench
  ConfigError,
  NotFound,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

// Process exit codes used by the CLI.
enum class ExitCode : int { Ok = 0, Usage = 1, Data = 2, External = 3 };

ExitCode exit_code_for(ErrorCode code);

}  // namespace clausefair
