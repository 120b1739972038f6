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

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace clausefair::corpus {

inline constexpr std::string_view kUntitledHeading = "(untitled)";

struct Section {
  std::string heading;
  std::vector<std::string> clauses;

  friend bool operator==(const Section&, const Section&) = default;
};

struct ContractDocument {
  std::string doc_id;
  std::string domain_tag;
  std::string source_uri;
  std::vector<Section> sections;

  friend bool operator==(const ContractDocument&, const ContractDocument&) = default;
};

struct Sentence {
  std::string sentence_id;
  std::string doc_id;
  std::string section_path;
  int position = 0;
  std::string text;
  bool redacted = false;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// Builds a document from lenient HTML. Heading tags (h1..h6) open sections;
// block elements (p, li, div, td, ...) close clauses. Text that precedes the
// first heading lands in a section titled "(untitled)". Script and style
// content is dropped and character entities are decoded.
//
// Throws Error(EmptyDocument) when no clause text can be extracted.
ContractDocument ingest_html(std::string_view raw_html, std::string doc_id);

void to_json(nlohmann::json& j, const Section& s);
void from_json(const nlohmann::json& j, Section& s);
void to_json(nlohmann::json& j, const ContractDocument& d);
void from_json(const nlohmann::json& j, ContractDocument& d);
void to_json(nlohmann::json& j, const Sentence& s);
void from_json(const nlohmann::json& j, Sentence& s);

}  // namespace clausefair::corpus
