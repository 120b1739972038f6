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

#include "clausefair/classifier/features.hpp"

#include <cctype>

#include "clausefair/error.hpp"

namespace clausefair::classifier {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || u >= 0x80) {
      current += static_cast<char>(std::tolower(u));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

void FeatureSpec::validate() const {
  if (hash_bits < 4 || hash_bits > 24) {
    throw Error(ErrorCode::ConfigError, "features.hash_bits must be in [4, 24]");
  }
  if (word_ngram_max < 1) throw Error(ErrorCode::ConfigError, "features.word_ngram_max must be >= 1");
  if (char_ngram_max != 0 && (char_ngram_min < 1 || char_ngram_min > char_ngram_max)) {
    throw Error(ErrorCode::ConfigError, "features.char_ngram_min must be in [1, char_ngram_max]");
  }
}

void to_json(nlohmann::json& j, const FeatureSpec& s) {
  j = nlohmann::json{{"hash", "fnv1a64"},
                     {"hash_bits", s.hash_bits},
                     {"word_ngram_max", s.word_ngram_max},
                     {"char_ngram_min", s.char_ngram_min},
                     {"char_ngram_max", s.char_ngram_max},
                     {"normalization", "l2"}};
}

void from_json(const nlohmann::json& j, FeatureSpec& s) {
  s.hash_bits = j.value("hash_bits", s.hash_bits);
  s.word_ngram_max = j.value("word_ngram_max", s.word_ngram_max);
  s.char_ngram_min = j.value("char_ngram_min", s.char_ngram_min);
  s.char_ngram_max = j.value("char_ngram_max", s.char_ngram_max);
  s.validate();
}

}  // namespace clausefair::classifier
