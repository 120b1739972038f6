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

#include <span>
#include <utility>

#include "clausefair/label.hpp"

namespace clausefair::annotation {

// Cohen's kappa between two raters over the three-class label space:
//
//   kappa = (p_o - p_e) / (1 - p_e),   p_e = sum_k pA(k) * pB(k)
//
// where pA and pB are each rater's marginal label frequencies. When p_e == 1
// both raters used one identical label throughout, the ratio is 0/0, and the
// result is defined as 1.
//
// Throws Error(EmptyInput) for an empty list.
double cohen_kappa(std::span<const std::pair<Label, Label>> pairs);

}  // namespace clausefair::annotation
