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

#include "clausefair/llm/gateway.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>
#include <unordered_set>

#include "clausefair/corpus/sentences.hpp"
#include "clausefair/error.hpp"
#include "clausefair/util.hpp"

namespace clausefair::llm {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

std::string dedup_key(std::string_view text) {
  return corpus::normalize_whitespace(to_lower(text));
}

std::string strip_quotes(std::string text) {
  text = trim(text);
  while (text.size() >= 2 && (text.front() == '"' || text.front() == '\'') && text.back() == text.front()) {
    text = trim(std::string_view(text).substr(1, text.size() - 2));
  }
  return text;
}

// Splits "[A., B., C.]" after sentence punctuation; commas inside a sentence
// stay put.
std::vector<std::string> split_bracketed(std::string_view inner) {
  std::vector<std::string> out;
  std::string current;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    const char c = inner[i];
    if (c == ',') {
      std::size_t k = current.size();
      while (k > 0 && std::isspace(static_cast<unsigned char>(current[k - 1])) != 0) --k;
      char prev = k > 0 ? current[k - 1] : '\0';
      if (prev == '"' || prev == '\'') prev = k > 1 ? current[k - 2] : '\0';
      if (prev == '.' || prev == '!' || prev == '?') {
        out.push_back(strip_quotes(current));
        current.clear();
        continue;
      }
    }
    current.push_back(c);
  }
  if (!trim(current).empty()) out.push_back(strip_quotes(current));
  return out;
}

}  // namespace

Label parse_label(std::string_view response) {
  const std::string text = corpus::normalize_whitespace(to_lower(response));
  std::optional<Label> best;
  std::size_t best_pos = 0;
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  auto consider = [&](std::size_t pos, Label label) {
    if (!best || pos >= best_pos) {
      best = label;
      best_pos = pos;
    }
  };
  for (const auto& [phrase, label] : {std::pair<std::string_view, Label>{"potentially unfair", Label::PotentiallyUnfair},
                                      {"clearly unfair", Label::ClearlyUnfair}}) {
    for (auto pos = text.find(phrase); pos != std::string::npos; pos = text.find(phrase, pos + 1)) {
      spans.emplace_back(pos, pos + phrase.size());
      consider(pos, label);
    }
  }
  constexpr std::string_view fair = "fair";
  for (auto pos = text.find(fair); pos != std::string::npos; pos = text.find(fair, pos + 1)) {
    const auto end = pos + fair.size();
    if (pos > 0 && is_word_char(text[pos - 1])) continue;
    if (end < text.size() && is_word_char(text[end])) continue;
    const bool covered = std::any_of(spans.begin(), spans.end(),
                                     [&](const auto& s) { return pos >= s.first && end <= s.second; });
    if (!covered) consider(pos, Label::Fair);
  }
  if (!best) throw Error(ErrorCode::ParseError, "no class label in response: " + std::string(response.substr(0, 120)));
  return *best;
}

PromptedClassification classify_prompted(LlmClient& client, const PromptTemplate& tmpl,
                                         std::string_view sentence, const RequestSettings& settings) {
  if (tmpl.kind == PromptKind::Augment) {
    throw Error(ErrorCode::InvalidTemplate, tmpl.template_id + ": not a classification template");
  }
  const std::string prompt = render(tmpl, sentence);
  std::string response = client.complete(prompt, settings);
  PromptedClassification out;
  out.label = parse_label(response);
  if (tmpl.kind == PromptKind::CoT) out.rationale = std::move(response);
  return out;
}

std::vector<std::string> parse_sentence_list(std::string_view response) {
  std::string text = trim(response);
  {
    const std::string lower = to_lower(text);
    constexpr std::string_view intro = "<list of sentences>";
    if (auto pos = lower.find(intro); pos != std::string::npos) {
      auto rest = pos + intro.size();
      if (rest < text.size() && text[rest] == ':') ++rest;
      text = trim(std::string_view(text).substr(rest));
    }
  }
  std::vector<std::string> items;
  if (!text.empty() && text.front() == '[') {
    try {
      const auto j = nlohmann::json::parse(text);
      if (j.is_array() && std::all_of(j.begin(), j.end(), [](const auto& v) { return v.is_string(); })) {
        for (const auto& v : j) items.push_back(trim(v.get<std::string>()));
      }
    } catch (const nlohmann::json::exception&) {
    }
    if (items.empty() && text.back() == ']') {
      items = split_bracketed(std::string_view(text).substr(1, text.size() - 2));
    }
  }
  if (items.empty()) {
    static const std::regex item_line(R"(^\s*(?:\d+[.)]|[-*]|•)\s+(.+?)\s*$)");
    std::istringstream in(text);
    std::string line;
    std::smatch m;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (std::regex_match(line, m, item_line)) items.push_back(strip_quotes(m[1].str()));
    }
  }
  items.erase(std::remove_if(items.begin(), items.end(), [](const std::string& s) { return s.empty(); }),
              items.end());
  if (items.empty()) throw Error(ErrorCode::ParseError, "response holds no sentence list");
  return items;
}

std::string_view to_string(CandidateStatus status) {
  switch (status) {
    case CandidateStatus::Pending: return "pending";
    case CandidateStatus::Verified: return "verified";
    case CandidateStatus::Dropped: return "dropped";
  }
  return "pending";
}

namespace {
CandidateStatus candidate_status_from_string(std::string_view s) {
  if (s == "pending") return CandidateStatus::Pending;
  if (s == "verified") return CandidateStatus::Verified;
  if (s == "dropped") return CandidateStatus::Dropped;
  throw Error(ErrorCode::ParseError, "unknown candidate status: " + std::string(s));
}
}  // namespace

std::size_t AugmentationBatch::count(CandidateStatus status) const {
  return static_cast<std::size_t>(std::count_if(candidates.begin(), candidates.end(),
                                                [&](const Candidate& c) { return c.status == status; }));
}

AugmentationBatch generate_candidates(LlmClient& client, const PromptTemplate& tmpl, int n,
                                      std::span<const std::string> existing, std::string batch_id,
                                      const RequestSettings& settings) {
  if (tmpl.kind != PromptKind::Augment) {
    throw Error(ErrorCode::InvalidTemplate, tmpl.template_id + ": not an augmentation template");
  }
  if (n <= 0) throw Error(ErrorCode::InvalidTemplate, "candidate count must be positive");
  PromptTemplate sized = tmpl;
  sized.candidate_count = n;
  const std::string response = client.complete(render(sized), settings);
  auto items = parse_sentence_list(response);

  AugmentationBatch batch;
  batch.batch_id = batch_id.empty()
                       ? tmpl.template_id + "-" + hex64(fnv1a64(response)).substr(0, 8)
                       : std::move(batch_id);
  batch.template_id = tmpl.template_id;
  batch.scenario = *tmpl.scenario;
  if (items.size() > static_cast<std::size_t>(n)) items.resize(static_cast<std::size_t>(n));
  batch.returned = items.size();

  std::unordered_set<std::string> seen;
  for (const auto& e : existing) seen.insert(dedup_key(e));
  for (auto& item : items) {
    if (!seen.insert(dedup_key(item)).second) {
      ++batch.duplicates_removed;
      continue;
    }
    batch.candidates.push_back({std::move(item), CandidateStatus::Pending, {}, {}});
  }
  return batch;
}

AugmentationBatch review_candidate(AugmentationBatch batch, std::size_t index,
                                   const std::string& reviewer_id, bool accept) {
  if (index >= batch.candidates.size()) {
    throw Error(ErrorCode::NotFound, "batch " + batch.batch_id + " has no candidate " + std::to_string(index));
  }
  if (reviewer_id.empty()) throw Error(ErrorCode::InvalidState, "reviewer id is empty");
  auto& c = batch.candidates[index];
  const bool seen = c.rejected_by == reviewer_id ||
                    std::find(c.accepted_by.begin(), c.accepted_by.end(), reviewer_id) != c.accepted_by.end();
  if (seen) throw Error(ErrorCode::DuplicateReview, reviewer_id + " already reviewed candidate " + std::to_string(index));
  if (c.status != CandidateStatus::Pending) {
    throw Error(ErrorCode::InvalidState, "candidate " + std::to_string(index) + " is already " +
                                             std::string(to_string(c.status)));
  }
  if (accept) {
    c.accepted_by.push_back(reviewer_id);
    if (c.accepted_by.size() >= 2) c.status = CandidateStatus::Verified;
  } else {
    c.rejected_by = reviewer_id;
    c.status = CandidateStatus::Dropped;
  }
  return batch;
}

std::vector<LabeledExample> to_synthetic_examples(const AugmentationBatch& batch) {
  std::vector<LabeledExample> out;
  for (std::size_t i = 0; i < batch.candidates.size(); ++i) {
    const auto& c = batch.candidates[i];
    if (!c.verified()) continue;
    LabeledExample e;
    e.sentence_id = "syn/" + batch.batch_id + "/" + std::to_string(i);
    e.text = c.text;
    e.label = Label::ClearlyUnfair;
    e.provenance = Provenance::Synthetic;
    e.verified = true;
    out.push_back(std::move(e));
  }
  return out;
}

void to_json(nlohmann::json& j, const Candidate& c) {
  j = nlohmann::json{{"text", c.text},
                     {"status", to_string(c.status)},
                     {"verified", c.verified()},
                     {"accepted_by", c.accepted_by}};
  if (!c.rejected_by.empty()) j["rejected_by"] = c.rejected_by;
}

void from_json(const nlohmann::json& j, Candidate& c) {
  c.text = j.at("text").get<std::string>();
  c.status = candidate_status_from_string(j.at("status").get<std::string>());
  c.accepted_by = j.value("accepted_by", std::vector<std::string>{});
  c.rejected_by = j.value("rejected_by", std::string{});
}

void to_json(nlohmann::json& j, const AugmentationBatch& b) {
  j = nlohmann::json{{"batch_id", b.batch_id},
                     {"template_id", b.template_id},
                     {"scenario", to_string(b.scenario)},
                     {"returned", b.returned},
                     {"duplicates_removed", b.duplicates_removed},
                     {"pending", b.count(CandidateStatus::Pending)},
                     {"verified", b.count(CandidateStatus::Verified)},
                     {"dropped", b.count(CandidateStatus::Dropped)},
                     {"candidates", b.candidates}};
}

void from_json(const nlohmann::json& j, AugmentationBatch& b) {
  b.batch_id = j.at("batch_id").get<std::string>();
  b.template_id = j.at("template_id").get<std::string>();
  b.scenario = scenario_from_string(j.at("scenario").get<std::string>());
  b.returned = j.value("returned", std::size_t{0});
  b.duplicates_removed = j.value("duplicates_removed", std::size_t{0});
  b.candidates = j.at("candidates").get<std::vector<Candidate>>();
}

}  // namespace clausefair::llm
