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

#include <array>
#include <cstdint>
#include <set>
#include <span>
#include <string>

#include <json.hpp>

#include "clausefair/label.hpp"
#include "clausefair/labeled_example.hpp"

namespace clausefair::corpus {

enum class Bucket : int { Train = 0, Validation = 1, Test = 2 };
inline constexpr std::size_t kNumBuckets = 3;

std::string_view to_string(Bucket bucket);
Bucket bucket_from_string(std::string_view text);

struct SplitConfig {
  std::array<double, kNumBuckets> ratios = {0.5, 0.2, 0.3};
  std::uint64_t seed = 0;

  // Throws Error(InvalidSplitConfig) unless every ratio is non-negative and
  // they sum to 1 within 1e-9.
  void validate() const;
};

struct DatasetSplit {
  std::set<std::string> train;
  std::set<std::string> validation;
  std::set<std::string> test;

  const std::set<std::string>& bucket(Bucket b) const;
  std::set<std::string>& bucket(Bucket b);
};

// Largest-remainder apportionment of `count` items over `ratios`. Floors are
// taken first; leftover units go to the largest fractional parts, earlier
// buckets winning ties.
std::array<std::size_t, kNumBuckets> apportion(
    std::size_t count, const std::array<double, kNumBuckets>& ratios);

// Stratified split. Each class is apportioned independently, then its
// examples (in input order) are shuffled with a generator seeded from
// cfg.seed and dealt into train, validation and test in that order.
//
// Throws Error(InsufficientClass) if any class has fewer examples than the
// number of nonzero-ratio buckets.
DatasetSplit stratified_split(std::span<const LabeledExample> examples,
                              const SplitConfig& cfg);

void to_json(nlohmann::json& j, const DatasetSplit& s);
void from_json(const nlohmann::json& j, DatasetSplit& s);

}  // namespace clausefair::corpus
