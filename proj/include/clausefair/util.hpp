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

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace clausefair {

// 64-bit FNV-1a. Stable across platforms, which std::hash is not.
constexpr std::uint64_t fnv1a64(std::string_view data,
                                std::uint64_t seed = 0xcbf29ce484222325ULL) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value);

// Fisher-Yates with raw mt19937_64 draws, so the permutation is identical
// on every standard library (std::shuffle is not).
template <typename T>
void seeded_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(items[i - 1], items[j]);
  }
}

std::string to_lower(std::string_view text);
std::string trim(std::string_view text);

std::string read_file(const std::filesystem::path& path);
// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Appends one compact JSON document and a newline, then fsyncs.
void append_json_line(const std::filesystem::path& path, const nlohmann::json& value);
void write_json_lines(const std::filesystem::path& path,
                      const std::vector<nlohmann::json>& values);
// Missing file reads as empty. Blank lines are skipped.
std::vector<nlohmann::json> read_json_lines(const std::filesystem::path& path);

// UTC wall-clock time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp();

}  // namespace clausefair
