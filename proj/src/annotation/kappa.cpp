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

#include "clausefair/annotation/kappa.hpp"

#include <Eigen/Core>

#include "clausefair/error.hpp"

namespace clausefair::annotation {

double cohen_kappa(std::span<const std::pair<Label, Label>> pairs) {
  if (pairs.empty()) throw Error(ErrorCode::EmptyInput, "cohen_kappa needs at least one pair");

  // Joint counts: rows are rater A, columns rater B.
  Eigen::Matrix3d joint = Eigen::Matrix3d::Zero();
  for (const auto& [a, b] : pairs) joint(index_of(a), index_of(b)) += 1.0;
  joint /= static_cast<double>(pairs.size());

  const double p_o = joint.trace();
  const double p_e = joint.rowwise().sum().dot(joint.colwise().sum().transpose());
  if (p_e >= 1.0) return 1.0;
  return (p_o - p_e) / (1.0 - p_e);
}

}  // namespace clausefair::annotation
