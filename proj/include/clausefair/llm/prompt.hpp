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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace clausefair::llm {

enum class PromptKind { Augment, Direct, CoT };
std::string_view to_string(PromptKind kind);
PromptKind prompt_kind_from_string(std::string_view text);

// The six imbalance scenarios that augmentation prompts target.
enum class Scenario {
  Jurisdiction,
  ChoiceOfLaw,
  UnilateralChange,
  UnilateralTermination,
  Indemnity,
  Arbitration,
};
inline constexpr std::size_t kNumScenarios = 6;
std::string_view to_string(Scenario scenario);
Scenario scenario_from_string(std::string_view text);

struct PromptExample {
  std::string text;
  std::string answer;  // empty for augmentation exemplars

  friend bool operator==(const PromptExample&, const PromptExample&) = default;
};

// A few-shot prompt assembled from five sections: system behavior, context,
// examples, task, and either an output format (Augment) or the input sentence
// (Direct, CoT).
struct PromptTemplate {
  std::string template_id;
  PromptKind kind = PromptKind::Direct;
  std::optional<Scenario> scenario;
  int version = 1;
  std::string system_behavior;
  std::string context;
  std::vector<PromptExample> examples;
  // For Augment templates "{count}" is replaced by candidate_count.
  std::string task;
  std::optional<std::string> output_format;
  int candidate_count = 25;

  // Throws Error(InvalidTemplate): Augment needs an output format and a
  // scenario; Direct and CoT must not carry an output format.
  void validate() const;

  friend bool operator==(const PromptTemplate&, const PromptTemplate&) = default;
};

inline constexpr std::string_view kInputPlaceholder = "<input>";

// Byte-exact assembly:
//
//   System Behavior: ...\n\nContext: ...\n\n
//   Example 1: ...\nAnswer: ...\n\n ...            (examples with answers)
//   Example 1: ...\nExample 2: ...\n\n              (bare exemplars)
//   Task: ...\n\n
//   Output Format should be as follows: ...\n      (Augment)
//   Input Sentence: <sentence>\n                    (Direct, CoT)
//
// Throws Error(MissingInput) when a Direct/CoT template gets no input, and
// Error(InvalidTemplate) when an Augment template gets one.
std::string render(const PromptTemplate& tmpl,
                   std::optional<std::string_view> input = std::nullopt);

// Prompt assets are plain text: a front-matter header between "---" lines
// (template_id, kind, scenario, version, candidate_count) followed by the
// prompt body in rendered form, with "<input>" standing in for the sentence.
PromptTemplate parse_template(std::string_view asset);
std::string serialize_template(const PromptTemplate& tmpl);
PromptTemplate load_template(const std::filesystem::path& file);
// Every *.txt asset in `dir`, sorted by template_id.
std::vector<PromptTemplate> load_template_dir(const std::filesystem::path& dir);

}  // namespace clausefair::llm
