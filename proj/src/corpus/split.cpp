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

#include "clausefair/corpus/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "clausefair/error.hpp"
#include "clausefair/util.hpp"

namespace clausefair::corpus {

std::string_view to_string(Bucket bucket) {
  switch (bucket) {
    case Bucket::Train: return "train";
    case Bucket::Validation: return "validation";
    case Bucket::Test: return "test";
  }
  return "train";
}

Bucket bucket_from_string(std::string_view text) {
  const std::string key = to_lower(text);
  if (key == "train") return Bucket::Train;
  if (key == "validation" || key == "val" || key == "dev") return Bucket::Validation;
  if (key == "test") return Bucket::Test;
  throw Error(ErrorCode::ConfigError, "unknown split bucket '" + std::string(text) + "'");
}

void SplitConfig::validate() const {
  double sum = 0.0;
  for (double r : ratios) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw Error(ErrorCode::InvalidSplitConfig, "split ratios must be non-negative");
    }
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidSplitConfig, "split ratios must sum to 1");
  }
}

const std::set<std::string>& DatasetSplit::bucket(Bucket b) const {
  switch (b) {
    case Bucket::Train: return train;
    case Bucket::Validation: return validation;
    case Bucket::Test: return test;
  }
  return train;
}

std::set<std::string>& DatasetSplit::bucket(Bucket b) {
  return const_cast<std::set<std::string>&>(std::as_const(*this).bucket(b));
}

std::array<std::size_t, kNumBuckets> apportion(std::size_t count,
                                               const std::array<double, kNumBuckets>& ratios) {
  std::array<std::size_t, kNumBuckets> out{};
  std::array<double, kNumBuckets> remainder{};
  std::size_t assigned = 0;
  for (std::size_t b = 0; b < kNumBuckets; ++b) {
    const double quota = ratios[b] * static_cast<double>(count);
    // Absorb representation error such as 0.3 * 240 = 71.99999999999999.
    const double floor = std::floor(quota + 1e-9);
    out[b] = static_cast<std::size_t>(floor);
    remainder[b] = std::max(0.0, quota - floor);
    assigned += out[b];
  }
  std::array<std::size_t, kNumBuckets> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b];
  });
  for (std::size_t k = 0; assigned < count; k = (k + 1) % kNumBuckets) {
    if (ratios[order[k]] <= 0.0) continue;
    ++out[order[k]];
    ++assigned;
  }
  return out;
}

DatasetSplit stratified_split(std::span<const LabeledExample> examples,
                              const SplitConfig& cfg) {
  cfg.validate();
  const auto nonzero = static_cast<std::size_t>(
      std::count_if(cfg.ratios.begin(), cfg.ratios.end(), [](double r) { return r > 0.0; }));

  std::array<std::vector<std::string>, kNumLabels> by_class;
  std::set<std::string> seen;
  for (const auto& e : examples) {
    if (!seen.insert(e.sentence_id).second) {
      throw Error(ErrorCode::Conflict, "duplicate sentence_id '" + e.sentence_id + "' in split input");
    }
    by_class[index_of(e.label)].push_back(e.sentence_id);
  }

  DatasetSplit split;
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    auto& ids = by_class[c];
    if (ids.size() < nonzero) {
      throw Error(ErrorCode::InsufficientClass,
                  "class '" + std::string(to_string(label_at(c))) + "' has " +
                      std::to_string(ids.size()) + " examples, need at least " +
                      std::to_string(nonzero));
    }
    std::mt19937_64 rng(cfg.seed + 0x9E3779B97F4A7C15ULL * (c + 1));
    seeded_shuffle(ids, rng);
    const auto counts = apportion(ids.size(), cfg.ratios);
    std::size_t at = 0;
    for (std::size_t b = 0; b < kNumBuckets; ++b) {
      auto& bucket = split.bucket(static_cast<Bucket>(b));
      for (std::size_t k = 0; k < counts[b]; ++k) bucket.insert(ids[at++]);
    }
  }
  return split;
}

void to_json(nlohmann::json& j, const DatasetSplit& s) {
  j = nlohmann::json{{"train", s.train}, {"validation", s.validation}, {"test", s.test}};
}

void from_json(const nlohmann::json& j, DatasetSplit& s) {
  s.train = j.at("train").get<std::set<std::string>>();
  s.validation = j.at("validation").get<std::set<std::string>>();
  s.test = j.at("test").get<std::set<std::string>>();
}

}  // namespace clausefair::corpus
