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

#include "clausefair/corpus/sentences.hpp"

#include <algorithm>
#include <cctype>

#include "clausefair/util.hpp"

namespace clausefair::corpus {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_closing_quote(std::string_view text, std::size_t i, std::size_t* width) {
  const char c = text[i];
  if (c == '"' || c == '\'') {
    *width = 1;
    return true;
  }
  // U+201D and U+2019 in UTF-8.
  if (text.substr(i, 3) == "\xE2\x80\x9D" || text.substr(i, 3) == "\xE2\x80\x99") {
    *width = 3;
    return true;
  }
  return false;
}

bool opens_sentence(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isupper(u) || std::isdigit(u) || c == '"' || c == '\'' || c == '(' ||
         c == '[' || u >= 0x80;
}

}  // namespace

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    const bool nbsp = c == '\xC2' && i + 1 < text.size() && text[i + 1] == '\xA0';
    if (is_space(c) || nbsp) {
      if (nbsp) ++i;
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

std::vector<std::string> SentenceSplitter::default_abbreviations() {
  return {"e.g.", "i.e.", "no.",   "nos.",   "sec.",  "secs.", "art.",  "para.",
          "inc.", "ltd.", "co.",   "corp.",  "llc.",  "mr.",   "mrs.",  "ms.",
          "dr.",  "st.",  "vs.",   "v.",     "cf.",   "approx.", "dept.", "u.s.",
          "fig.", "ex.",  "p.",    "pp.",    "viz.",  "et al.", "jr.",   "sr."};
}

SentenceSplitter::SentenceSplitter() : SentenceSplitter(default_abbreviations()) {}

SentenceSplitter::SentenceSplitter(std::vector<std::string> abbreviations) {
  for (auto& a : abbreviations) abbreviations_.push_back(to_lower(a));
}

bool SentenceSplitter::is_abbreviation(std::string_view token) const {
  const std::string lower = to_lower(token);
  return std::find(abbreviations_.begin(), abbreviations_.end(), lower) !=
         abbreviations_.end();
}

std::vector<std::string> SentenceSplitter::split(std::string_view text) const {
  std::vector<std::string> out;
  const std::string normalized = normalize_whitespace(text);
  const std::string_view s = normalized;
  std::size_t start = 0;
  int depth = 0;

  auto emit = [&](std::size_t end) {
    std::string sentence = trim(s.substr(start, end - start));
    if (!sentence.empty()) out.push_back(std::move(sentence));
  };

  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '(' || c == '[') {
      ++depth;
      continue;
    }
    if (c == ')' || c == ']') {
      depth = std::max(0, depth - 1);
      continue;
    }
    if (!is_terminator(c) || depth > 0) continue;

    std::size_t j = i;
    while (j < s.size() && is_terminator(s[j])) ++j;
    std::size_t width = 0;
    while (j < s.size() && is_closing_quote(s, j, &width)) j += width;
    if (j >= s.size()) break;
    if (!is_space(s[j])) continue;
    std::size_t k = j;
    while (k < s.size() && is_space(s[k])) ++k;
    if (k >= s.size() || !opens_sentence(s[k])) continue;

    if (c == '.' && j == i + 1) {
      // Token ending at this period, back to the previous space.
      std::size_t b = i;
      while (b > start && !is_space(s[b - 1])) --b;
      std::string_view token = s.substr(b, i + 1 - b);
      while (!token.empty() && (token.front() == '(' || token.front() == '"')) {
        token.remove_prefix(1);
      }
      if (is_abbreviation(token)) continue;
      // Two-word abbreviations such as "et al.".
      if (b > start + 1) {
        std::size_t b2 = b - 1;
        while (b2 > start && !is_space(s[b2 - 1])) --b2;
        if (is_abbreviation(s.substr(b2, i + 1 - b2))) continue;
      }
      // A leading enumerator such as "1." or "a." does not end a sentence.
      const std::string_view stem = token.substr(0, token.size() - 1);
      const bool enumerator =
          !stem.empty() && b == start &&
          (std::all_of(stem.begin(), stem.end(),
                       [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }) ||
           (stem.size() == 1 && std::isalpha(static_cast<unsigned char>(stem[0]))));
      if (enumerator) continue;
    }
    emit(j);
    start = k;
    i = k - 1;
  }
  if (start < s.size()) emit(s.size());
  return out;
}

std::vector<std::string> RedactionDetector::default_patterns() {
  return {R"((?i)\[\s*(\*+|x{2,}|redacted|_{2,}|\.{3})\s*\])", R"(\bX{4,}\b)", R"(\*{3,})"};
}

RedactionDetector::RedactionDetector() : RedactionDetector(default_patterns()) {}

RedactionDetector::RedactionDetector(const std::vector<std::string>& patterns) {
  for (std::string_view pattern : patterns) {
    auto flags = std::regex::ECMAScript;
    if (pattern.starts_with("(?i)")) {
      pattern.remove_prefix(4);
      flags |= std::regex::icase;
    }
    patterns_.emplace_back(std::string(pattern), flags);
  }
}

bool RedactionDetector::is_redacted(std::string_view text) const {
  for (const auto& re : patterns_) {
    if (std::regex_search(text.begin(), text.end(), re)) return true;
  }
  return false;
}

std::vector<Sentence> extract_sentences(const ContractDocument& doc,
                                        const SentenceSplitter& splitter,
                                        const RedactionDetector& redaction) {
  std::vector<Sentence> out;
  for (std::size_t si = 0; si < doc.sections.size(); ++si) {
    const auto& section = doc.sections[si];
    for (std::size_t ci = 0; ci < section.clauses.size(); ++ci) {
      const auto pieces = splitter.split(section.clauses[ci]);
      for (std::size_t p = 0; p < pieces.size(); ++p) {
        Sentence s;
        s.doc_id = doc.doc_id;
        s.section_path = std::to_string(si) + "/" + std::to_string(ci);
        s.position = static_cast<int>(p);
        s.sentence_id = doc.doc_id + "/" + s.section_path + "/" + std::to_string(p);
        s.text = pieces[p];
        s.redacted = redaction.is_redacted(s.text);
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

}  // namespace clausefair::corpus
