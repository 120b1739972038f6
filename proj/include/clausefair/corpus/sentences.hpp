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

#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "clausefair/corpus/document.hpp"

namespace clausefair::corpus {

// Rule-based sentence boundary detection for contract prose.
//
// A boundary is a run of '.', '!' or '?' followed by whitespace and then an
// uppercase letter, digit, quote or opening bracket (or end of text). No
// boundary is placed inside parentheses, so "thirty (30) days" and
// "(see Sec. 4. Below)" stay intact, and none is placed after a token from
// the abbreviation allowlist.
class SentenceSplitter {
 public:
  SentenceSplitter();
  explicit SentenceSplitter(std::vector<std::string> abbreviations);

  std::vector<std::string> split(std::string_view text) const;

  static std::vector<std::string> default_abbreviations();

 private:
  bool is_abbreviation(std::string_view token) const;

  std::vector<std::string> abbreviations_;  // lowercase, with trailing '.'
};

// Flags sentences that contain masked-out content. The default patterns match
// bracketed mask runs such as "[***]" or "[REDACTED]", bare "XXXX" runs and
// bare asterisk runs. Patterns are ECMAScript regexes; a leading "(?i)" makes
// one case-insensitive.
class RedactionDetector {
 public:
  RedactionDetector();
  explicit RedactionDetector(const std::vector<std::string>& patterns);

  bool is_redacted(std::string_view text) const;

  static std::vector<std::string> default_patterns();

 private:
  std::vector<std::regex> patterns_;
};

// Collapses whitespace runs to single spaces and trims both ends.
std::string normalize_whitespace(std::string_view text);

// Segments every clause of `doc`. Sentence ids are "<doc_id>/<s>/<c>/<p>" and
// section paths "<s>/<c>", where s, c and p are 0-based section, clause and
// sentence-within-clause indices. Redacted sentences are returned with
// `redacted` set; callers exporting datasets must skip them.
std::vector<Sentence> extract_sentences(const ContractDocument& doc,
                                        const SentenceSplitter& splitter = {},
                                        const RedactionDetector& redaction = {});

}  // namespace clausefair::corpus
