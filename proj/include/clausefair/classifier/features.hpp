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

#include <Eigen/SparseCore>
#include <json.hpp>

#include "clausefair/util.hpp"

namespace clausefair::classifier {

// Hashed bag of n-grams. Word n-grams run over lowercase alphanumeric tokens;
// character n-grams run over each token padded with '<' and '>'. Every
// feature name is hashed with FNV-1a into 2^hash_bits buckets; the resulting
// count vector is L2-normalized.
struct FeatureSpec {
  int hash_bits = 16;
  int word_ngram_max = 2;
  // Character n-gram range; char_ngram_max == 0 disables them.
  int char_ngram_min = 3;
  int char_ngram_max = 0;

  Eigen::Index dimension() const { return Eigen::Index{1} << hash_bits; }
  void validate() const;

  friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

std::vector<std::string> tokenize(std::string_view text);

template <typename Scalar>
Eigen::SparseVector<Scalar> featurize(std::string_view text, const FeatureSpec& spec,
                                      int max_tokens) {
  auto tokens = tokenize(text);
  if (max_tokens > 0 && tokens.size() > static_cast<std::size_t>(max_tokens)) {
    tokens.resize(static_cast<std::size_t>(max_tokens));
  }
  const auto mask = static_cast<std::uint64_t>(spec.dimension() - 1);
  std::vector<Eigen::Triplet<Scalar>> triplets;
  auto add = [&](std::string_view prefix, std::string_view gram) {
    const auto h = fnv1a64(gram, fnv1a64(prefix));
    triplets.emplace_back(static_cast<Eigen::Index>(h & mask), 0, Scalar(1));
  };
  for (int n = 1; n <= spec.word_ngram_max; ++n) {
    const std::string prefix = "w" + std::to_string(n) + ":";
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
      std::string gram = tokens[i];
      for (int k = 1; k < n; ++k) gram += ' ' + tokens[i + static_cast<std::size_t>(k)];
      add(prefix, gram);
    }
  }
  if (spec.char_ngram_max > 0) {
    for (const auto& token : tokens) {
      const std::string padded = "<" + token + ">";
      for (int n = spec.char_ngram_min; n <= spec.char_ngram_max; ++n) {
        const std::string prefix = "c" + std::to_string(n) + ":";
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= padded.size(); ++i) {
          add(prefix, std::string_view(padded).substr(i, static_cast<std::size_t>(n)));
        }
      }
    }
  }
  // Column vector assembled through a one-column sparse matrix so that
  // duplicate hashes are summed.
  Eigen::SparseMatrix<Scalar> column(spec.dimension(), 1);
  column.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SparseVector<Scalar> x = column.col(0);
  const Scalar norm = x.norm();
  if (norm > Scalar(0)) x /= norm;
  return x;
}

void to_json(nlohmann::json& j, const FeatureSpec& s);
void from_json(const nlohmann::json& j, FeatureSpec& s);

}  // namespace clausefair::classifier
