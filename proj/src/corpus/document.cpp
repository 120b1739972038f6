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

#include "clausefair/corpus/document.hpp"

#include <array>
#include <cctype>
#include <optional>

#include "clausefair/corpus/sentences.hpp"
#include "clausefair/error.hpp"
#include "clausefair/util.hpp"

namespace clausefair::corpus {

namespace {

constexpr std::array<std::string_view, 27> kBlockTags = {
    "p",       "div",    "li",     "ul",      "ol",     "td",     "th",
    "tr",      "table",  "tbody",  "thead",   "blockquote", "section",
    "article", "header", "footer", "main",    "body",   "html",   "pre",
    "dd",      "dt",     "dl",     "address", "center", "form",   "hr"};

constexpr std::array<std::string_view, 5> kSkippedContentTags = {
    "script", "style", "title", "noscript", "template"};

bool is_block(std::string_view tag) {
  for (auto t : kBlockTags) {
    if (t == tag) return true;
  }
  return false;
}

bool is_heading(std::string_view tag) {
  return tag.size() == 2 && tag[0] == 'h' && tag[1] >= '1' && tag[1] <= '6';
}

bool skips_content(std::string_view tag) {
  for (auto t : kSkippedContentTags) {
    if (t == tag) return true;
  }
  return false;
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::optional<std::string> named_entity(std::string_view name) {
  struct Entry {
    std::string_view name;
    std::string_view text;
  };
  static constexpr Entry kEntities[] = {
      {"amp", "&"},         {"lt", "<"},          {"gt", ">"},
      {"quot", "\""},       {"apos", "'"},        {"nbsp", " "},
      {"sect", "§"},   {"ndash", "–"},  {"mdash", "—"},
      {"lsquo", "‘"},  {"rsquo", "’"},  {"ldquo", "“"},
      {"rdquo", "”"},  {"copy", "©"},   {"reg", "®"},
      {"hellip", "…"}, {"para", "¶"},
  };
  for (const auto& e : kEntities) {
    if (e.name == name) return std::string(e.text);
  }
  return std::nullopt;
}

// Decodes one entity starting at text[i] == '&'. Returns the number of bytes
// consumed, or 0 if this is not a recognizable entity.
std::size_t decode_entity(std::string_view text, std::size_t i, std::string& out) {
  const std::size_t semi = text.find(';', i);
  if (semi == std::string_view::npos || semi - i > 10) return 0;
  const std::string_view body = text.substr(i + 1, semi - i - 1);
  if (body.empty()) return 0;
  if (body[0] == '#') {
    unsigned long cp = 0;
    try {
      if (body.size() > 1 && (body[1] == 'x' || body[1] == 'X')) {
        cp = std::stoul(std::string(body.substr(2)), nullptr, 16);
      } else {
        cp = std::stoul(std::string(body.substr(1)), nullptr, 10);
      }
    } catch (const std::exception&) {
      return 0;
    }
    if (cp == 0xA0) cp = ' ';
    append_utf8(out, cp);
    return semi - i + 1;
  }
  if (auto decoded = named_entity(body)) {
    out += *decoded;
    return semi - i + 1;
  }
  return 0;
}

class HtmlWalker {
 public:
  explicit HtmlWalker(ContractDocument& doc) : doc_(doc) {}

  void run(std::string_view html) {
    std::size_t i = 0;
    while (i < html.size()) {
      const char c = html[i];
      if (c == '<') {
        i = consume_markup(html, i);
      } else if (c == '&') {
        std::string decoded;
        const std::size_t n = decode_entity(html, i, decoded);
        if (n == 0) {
          text_sink() += '&';
          ++i;
        } else {
          text_sink() += decoded;
          i += n;
        }
      } else {
        text_sink() += c;
        ++i;
      }
    }
    flush_heading();
    flush_clause();
  }

 private:
  std::string& text_sink() { return in_heading_ ? heading_ : clause_; }

  std::size_t consume_markup(std::string_view html, std::size_t i) {
    if (html.substr(i, 4) == "<!--") {
      const std::size_t end = html.find("-->", i + 4);
      return end == std::string_view::npos ? html.size() : end + 3;
    }
    std::size_t j = i + 1;
    bool closing = false;
    if (j < html.size() && html[j] == '/') {
      closing = true;
      ++j;
    }
    if (j >= html.size() || !(std::isalpha(static_cast<unsigned char>(html[j])) ||
                              html[j] == '!' || html[j] == '?')) {
      // A bare '<' in running text.
      text_sink() += '<';
      return i + 1;
    }
    std::string name;
    while (j < html.size() && (std::isalnum(static_cast<unsigned char>(html[j])) ||
                               html[j] == '!' || html[j] == '?')) {
      name += static_cast<char>(std::tolower(static_cast<unsigned char>(html[j])));
      ++j;
    }
    // Skip attributes, honoring quotes.
    char quote = 0;
    while (j < html.size()) {
      const char c = html[j];
      if (quote) {
        if (c == quote) quote = 0;
      } else if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '>') {
        break;
      }
      ++j;
    }
    const std::size_t after = j < html.size() ? j + 1 : html.size();
    on_tag(name, closing);
    if (!closing && skips_content(name)) {
      const std::string close = "</" + name;
      std::size_t k = after;
      while (k < html.size()) {
        const std::size_t pos = html.find('<', k);
        if (pos == std::string_view::npos) return html.size();
        if (to_lower(html.substr(pos, close.size())) == close) {
          const std::size_t gt = html.find('>', pos);
          return gt == std::string_view::npos ? html.size() : gt + 1;
        }
        k = pos + 1;
      }
      return html.size();
    }
    return after;
  }

  void on_tag(const std::string& name, bool closing) {
    if (is_heading(name)) {
      if (closing) {
        flush_heading();
      } else {
        flush_heading();
        flush_clause();
        in_heading_ = true;
      }
      return;
    }
    if (name == "br") {
      text_sink() += ' ';
      return;
    }
    if (is_block(name)) {
      // An unclosed heading ends where the next block opens.
      if (in_heading_ && !closing) flush_heading();
      if (in_heading_) {
        text_sink() += ' ';
      } else {
        flush_clause();
      }
    }
  }

  void flush_heading() {
    if (!in_heading_) return;
    in_heading_ = false;
    std::string heading = normalize_whitespace(heading_);
    heading_.clear();
    if (heading.empty()) heading = std::string(kUntitledHeading);
    doc_.sections.push_back(Section{std::move(heading), {}});
  }

  void flush_clause() {
    std::string text = normalize_whitespace(clause_);
    clause_.clear();
    if (text.empty()) return;
    if (doc_.sections.empty()) {
      doc_.sections.push_back(Section{std::string(kUntitledHeading), {}});
    }
    doc_.sections.back().clauses.push_back(std::move(text));
  }

  ContractDocument& doc_;
  std::string clause_;
  std::string heading_;
  bool in_heading_ = false;
};

}  // namespace

ContractDocument ingest_html(std::string_view raw_html, std::string doc_id) {
  ContractDocument doc;
  doc.doc_id = std::move(doc_id);
  HtmlWalker(doc).run(raw_html);
  bool any_clause = false;
  for (const auto& s : doc.sections) any_clause = any_clause || !s.clauses.empty();
  if (!any_clause) {
    throw Error(ErrorCode::EmptyDocument, "no extractable text in document '" + doc.doc_id + "'");
  }
  return doc;
}

void to_json(nlohmann::json& j, const Section& s) {
  j = nlohmann::json{{"heading", s.heading}, {"clauses", s.clauses}};
}

void from_json(const nlohmann::json& j, Section& s) {
  s.heading = j.at("heading").get<std::string>();
  s.clauses = j.at("clauses").get<std::vector<std::string>>();
}

void to_json(nlohmann::json& j, const ContractDocument& d) {
  j = nlohmann::json{{"doc_id", d.doc_id},
                     {"domain_tag", d.domain_tag},
                     {"source_uri", d.source_uri},
                     {"sections", d.sections}};
}

void from_json(const nlohmann::json& j, ContractDocument& d) {
  d.doc_id = j.at("doc_id").get<std::string>();
  d.domain_tag = j.value("domain_tag", std::string{});
  d.source_uri = j.value("source_uri", std::string{});
  d.sections = j.at("sections").get<std::vector<Section>>();
}

void to_json(nlohmann::json& j, const Sentence& s) {
  j = nlohmann::json{{"sentence_id", s.sentence_id}, {"doc_id", s.doc_id},
                     {"section_path", s.section_path}, {"position", s.position},
                     {"text", s.text}, {"redacted", s.redacted}};
}

void from_json(const nlohmann::json& j, Sentence& s) {
  s.sentence_id = j.at("sentence_id").get<std::string>();
  s.doc_id = j.at("doc_id").get<std::string>();
  s.section_path = j.at("section_path").get<std::string>();
  s.position = j.at("position").get<int>();
  s.text = j.at("text").get<std::string>();
  s.redacted = j.value("redacted", false);
}

}  // namespace clausefair::corpus
