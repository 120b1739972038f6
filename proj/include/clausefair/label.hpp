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
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace clausefair {

// The three fairness classes, declared in increasing severity.
enum class Label : int { Fair = 0, PotentiallyUnfair = 1, ClearlyUnfair = 2 };

inline constexpr std::size_t kNumLabels = 3;
inline constexpr std::array<Label, kNumLabels> kAllLabels = {
    Label::Fair, Label::PotentiallyUnfair, Label::ClearlyUnfair};

constexpr std::size_t index_of(Label label) {
  return static_cast<std::size_t>(label);
}
constexpr Label label_at(std::size_t index) {
  return static_cast<Label>(static_cast<int>(index));
}
constexpr bool more_severe(Label a, Label b) { return index_of(a) > index_of(b); }

// Canonical wire spelling: "fair", "potentially_unfair", "clearly_unfair".
std::string_view to_string(Label label);
// Human-facing spelling: "Fair", "Potentially Unfair", "Clearly Unfair".
std::string_view display_name(Label label);

// Accepts the wire spelling, the display name, and the short forms F/P/C,
// case-insensitively.
std::optional<Label> parse_label_name(std::string_view text);
// Throws Error(ConfigError) when the name is unknown.
Label label_from_string(std::string_view text);

// Where a labeled example came from.
enum class Provenance { HumanAgreed, Adjudicated, Pseudo, Synthetic };

std::string_view to_string(Provenance provenance);
Provenance provenance_from_string(std::string_view text);

}  // namespace clausefair
