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

#include "clausefair/llm/prompt.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>
#include <utility>

#include "clausefair/error.hpp"
#include "clausefair/util.hpp"

namespace clausefair::llm {

namespace {

constexpr std::array<std::pair<PromptKind, std::string_view>, 3> kKindNames{{
    {PromptKind::Augment, "augment"},
    {PromptKind::Direct, "direct"},
    {PromptKind::CoT, "cot"},
}};

constexpr std::array<std::pair<Scenario, std::string_view>, kNumScenarios> kScenarioNames{{
    {Scenario::Jurisdiction, "jurisdiction"},
    {Scenario::ChoiceOfLaw, "choice_of_law"},
    {Scenario::UnilateralChange, "unilateral_change"},
    {Scenario::UnilateralTermination, "unilateral_termination"},
    {Scenario::Indemnity, "indemnity"},
    {Scenario::Arbitration, "arbitration"},
}};

constexpr std::string_view kSystem = "System Behavior: ";
constexpr std::string_view kContext = "Context: ";
constexpr std::string_view kAnswer = "Answer: ";
constexpr std::string_view kTask = "Task: ";
constexpr std::string_view kOutput = "Output Format should be as follows: ";
constexpr std::string_view kInput = "Input Sentence: ";

std::string replace_all(std::string text, std::string_view from, std::string_view to) {
  for (std::size_t pos = text.find(from); pos != std::string::npos;
       pos = text.find(from, pos + to.size())) {
    text.replace(pos, from.size(), to);
  }
  return text;
}

std::string assemble(const PromptTemplate& t, std::optional<std::string_view> input,
                     bool substitute_count) {
  std::string out;
  out.append(kSystem).append(t.system_behavior).append("\n\n");
  out.append(kContext).append(t.context).append("\n\n");
  const bool answered = std::any_of(t.examples.begin(), t.examples.end(),
                                    [](const PromptExample& e) { return !e.answer.empty(); });
  for (std::size_t i = 0; i < t.examples.size(); ++i) {
    const auto& e = t.examples[i];
    out.append("Example ").append(std::to_string(i + 1)).append(": ").append(e.text).append("\n");
    if (!e.answer.empty()) out.append(kAnswer).append(e.answer).append("\n");
    if (answered) out.append("\n");
  }
  if (!t.examples.empty() && !answered) out.append("\n");
  std::string task = t.task;
  if (substitute_count) task = replace_all(task, "{count}", std::to_string(t.candidate_count));
  out.append(kTask).append(task).append("\n\n");
  if (t.kind == PromptKind::Augment) {
    out.append(kOutput).append(t.output_format.value_or("")).append("\n");
  } else {
    out.append(kInput).append(input.value_or(kInputPlaceholder)).append("\n");
  }
  return out;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

// Returns the example number when `line` opens with "Example <n>: ".
std::optional<std::size_t> example_header(std::string_view line, std::size_t& text_start) {
  if (!starts_with(line, "Example ")) return std::nullopt;
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(line.data() + 8, line.data() + line.size(), n);
  if (ec != std::errc{} || ptr == line.data() + line.size() || *ptr != ':') return std::nullopt;
  text_start = static_cast<std::size_t>(ptr - line.data()) + 1;
  if (text_start < line.size() && line[text_start] == ' ') ++text_start;
  return n;
}

int parse_int_field(const std::string& key, const std::string& value) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::InvalidTemplate, "front matter '" + key + "' is not an integer: " + value);
  }
  return out;
}

}  // namespace

std::string_view to_string(PromptKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "direct";
}

PromptKind prompt_kind_from_string(std::string_view text) {
  const std::string lower = to_lower(text);
  for (const auto& [k, name] : kKindNames) {
    if (name == lower) return k;
  }
  throw Error(ErrorCode::InvalidTemplate, "unknown prompt kind: " + std::string(text));
}

std::string_view to_string(Scenario scenario) {
  for (const auto& [s, name] : kScenarioNames) {
    if (s == scenario) return name;
  }
  return "unilateral_termination";
}

Scenario scenario_from_string(std::string_view text) {
  const std::string lower = to_lower(text);
  for (const auto& [s, name] : kScenarioNames) {
    if (name == lower) return s;
  }
  throw Error(ErrorCode::InvalidTemplate, "unknown scenario: " + std::string(text));
}

void PromptTemplate::validate() const {
  if (template_id.empty()) throw Error(ErrorCode::InvalidTemplate, "template_id is empty");
  if (system_behavior.empty() || context.empty() || task.empty()) {
    throw Error(ErrorCode::InvalidTemplate, template_id + ": missing a required section");
  }
  if (kind == PromptKind::Augment) {
    if (!output_format || output_format->empty()) {
      throw Error(ErrorCode::InvalidTemplate, template_id + ": augment template needs an output format");
    }
    if (!scenario) throw Error(ErrorCode::InvalidTemplate, template_id + ": augment template needs a scenario");
    if (candidate_count <= 0) throw Error(ErrorCode::InvalidTemplate, template_id + ": candidate_count must be positive");
  } else if (output_format) {
    throw Error(ErrorCode::InvalidTemplate, template_id + ": classification template has an output format");
  }
}

std::string render(const PromptTemplate& tmpl, std::optional<std::string_view> input) {
  tmpl.validate();
  if (tmpl.kind == PromptKind::Augment) {
    if (input) throw Error(ErrorCode::InvalidTemplate, tmpl.template_id + ": augment template takes no input");
  } else if (!input) {
    throw Error(ErrorCode::MissingInput, tmpl.template_id + ": an input sentence is required");
  }
  return assemble(tmpl, input, true);
}

PromptTemplate parse_template(std::string_view asset) {
  std::istringstream in{std::string(asset)};
  std::string line;
  if (!std::getline(in, line) || trim(line) != "---") {
    throw Error(ErrorCode::InvalidTemplate, "prompt asset must open with a '---' header");
  }
  PromptTemplate t;
  bool have_kind = false;
  bool closed = false;
  while (std::getline(in, line)) {
    if (trim(line) == "---") {
      closed = true;
      break;
    }
    if (trim(line).empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::InvalidTemplate, "bad header line: " + line);
    const std::string key = trim(line.substr(0, colon));
    const std::string value = trim(line.substr(colon + 1));
    if (key == "template_id") {
      t.template_id = value;
    } else if (key == "kind") {
      t.kind = prompt_kind_from_string(value);
      have_kind = true;
    } else if (key == "scenario") {
      t.scenario = scenario_from_string(value);
    } else if (key == "version") {
      t.version = parse_int_field(key, value);
    } else if (key == "candidate_count") {
      t.candidate_count = parse_int_field(key, value);
    } else {
      throw Error(ErrorCode::InvalidTemplate, "unknown header key: " + key);
    }
  }
  if (!closed) throw Error(ErrorCode::InvalidTemplate, "unterminated header");
  if (!have_kind) throw Error(ErrorCode::InvalidTemplate, "header lacks 'kind'");

  // Continuation lines extend whichever field was opened last.
  std::string* current = nullptr;
  bool saw_input = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view v = line;
    std::size_t text_start = 0;
    if (v.empty()) {
      continue;
    } else if (starts_with(v, kSystem)) {
      t.system_behavior = std::string(v.substr(kSystem.size()));
      current = &t.system_behavior;
    } else if (starts_with(v, kContext)) {
      t.context = std::string(v.substr(kContext.size()));
      current = &t.context;
    } else if (auto n = example_header(v, text_start)) {
      if (*n != t.examples.size() + 1) {
        throw Error(ErrorCode::InvalidTemplate, "examples out of order at: " + line);
      }
      t.examples.push_back({std::string(v.substr(text_start)), ""});
      current = &t.examples.back().text;
    } else if (starts_with(v, kAnswer)) {
      if (t.examples.empty()) throw Error(ErrorCode::InvalidTemplate, "answer before any example");
      t.examples.back().answer = std::string(v.substr(kAnswer.size()));
      current = &t.examples.back().answer;
    } else if (starts_with(v, kTask)) {
      t.task = std::string(v.substr(kTask.size()));
      current = &t.task;
    } else if (starts_with(v, kOutput)) {
      t.output_format = std::string(v.substr(kOutput.size()));
      current = &*t.output_format;
    } else if (starts_with(v, kInput)) {
      if (trim(v.substr(kInput.size())) != kInputPlaceholder) {
        throw Error(ErrorCode::InvalidTemplate, "input line must hold the <input> placeholder");
      }
      saw_input = true;
      current = nullptr;
    } else if (current != nullptr) {
      current->append("\n").append(v);
    } else {
      throw Error(ErrorCode::InvalidTemplate, "text outside any section: " + line);
    }
  }
  if (t.kind != PromptKind::Augment && !saw_input) {
    throw Error(ErrorCode::InvalidTemplate, t.template_id + ": missing the <input> line");
  }
  if (t.kind == PromptKind::Augment && saw_input) {
    throw Error(ErrorCode::InvalidTemplate, t.template_id + ": augment template has an input line");
  }
  t.validate();
  return t;
}

std::string serialize_template(const PromptTemplate& tmpl) {
  tmpl.validate();
  std::string out = "---\n";
  out.append("template_id: ").append(tmpl.template_id).append("\n");
  out.append("kind: ").append(to_string(tmpl.kind)).append("\n");
  if (tmpl.scenario) out.append("scenario: ").append(to_string(*tmpl.scenario)).append("\n");
  out.append("version: ").append(std::to_string(tmpl.version)).append("\n");
  if (tmpl.kind == PromptKind::Augment) {
    out.append("candidate_count: ").append(std::to_string(tmpl.candidate_count)).append("\n");
  }
  out.append("---\n");
  out.append(assemble(tmpl, std::nullopt, false));
  return out;
}

PromptTemplate load_template(const std::filesystem::path& file) {
  try {
    return parse_template(read_file(file));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InvalidTemplate) throw;
    throw Error(ErrorCode::InvalidTemplate, file.string() + ": " + e.detail());
  }
}

std::vector<PromptTemplate> load_template_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::NotFound, "prompt directory not found: " + dir.string());
  }
  std::vector<PromptTemplate> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      out.push_back(load_template(entry.path()));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const PromptTemplate& a, const PromptTemplate& b) { return a.template_id < b.template_id; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].template_id == out[i - 1].template_id) {
      throw Error(ErrorCode::InvalidTemplate, "duplicate template_id: " + out[i].template_id);
    }
  }
  return out;
}

}  // namespace clausefair::llm
