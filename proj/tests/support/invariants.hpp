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

#include <set>
#include <string>
#include <vector>

#include "clausefair/selftrain/selftrain.hpp"

namespace clausefair::testing {

// Checks a finished frozen-mode self-training run against the loop
// invariants. `initial` is the state handed to self_train (after any
// injection). Returns one message per violation.
inline std::vector<std::string> selftrain_violations(const selftrain::SelfTrainState& initial,
                                                     const selftrain::SelfTrainState& final_state,
                                                     const selftrain::ThresholdConfig& tau,
                                                     const selftrain::StoppingPolicy& stopping) {
  std::vector<std::string> bad;
  const auto& h = final_state.history;
  const std::size_t total = initial.labeled_pool.size() + initial.unlabeled_pool.size();

  if (static_cast<int>(h.size()) != final_state.iteration) bad.push_back("history length != iteration");
  if (final_state.iteration > stopping.max_iterations) bad.push_back("iterations exceed max_iterations");
  if (final_state.iteration > final_state.best_iteration + stopping.patience) {
    bad.push_back("iterations exceed best_iteration + patience");
  }
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& r = h[i];
    const std::string at = "iteration " + std::to_string(r.iteration) + ": ";
    if (r.iteration != static_cast<int>(i) + 1) bad.push_back(at + "out of sequence");
    if (r.labeled_size + r.unlabeled_size != total) bad.push_back(at + "pool sizes not conserved");
    if (r.accepted > r.unlabeled_size) bad.push_back(at + "accepted more than the pool");
    if (i + 1 < h.size()) {
      const auto& next = h[i + 1];
      if (next.labeled_size != r.labeled_size + r.accepted) bad.push_back(at + "labeled pool did not grow by accepted");
      if (next.labeled_size < r.labeled_size) bad.push_back(at + "labeled pool shrank");
      if (next.unlabeled_size > r.unlabeled_size) bad.push_back(at + "unlabeled pool grew");
    }
  }
  if (!h.empty() && final_state.labeled_pool.size() != h.back().labeled_size + h.back().accepted) {
    bad.push_back("final labeled pool does not include last accepted batch");
  }

  std::set<std::string> labeled_ids, unlabeled_ids, all_ids;
  for (const auto& e : final_state.labeled_pool) {
    if (!labeled_ids.insert(e.sentence_id).second) bad.push_back("duplicate labeled id " + e.sentence_id);
  }
  for (const auto& u : final_state.unlabeled_pool) {
    unlabeled_ids.insert(u.sentence_id);
    if (labeled_ids.contains(u.sentence_id)) bad.push_back("id in both pools: " + u.sentence_id);
  }
  for (const auto& e : initial.labeled_pool) all_ids.insert(e.sentence_id);
  for (const auto& u : initial.unlabeled_pool) all_ids.insert(u.sentence_id);
  std::set<std::string> union_ids = labeled_ids;
  union_ids.insert(unlabeled_ids.begin(), unlabeled_ids.end());
  if (union_ids != all_ids) bad.push_back("pool union changed");

  for (const auto& e : final_state.labeled_pool) {
    if (e.provenance != Provenance::Pseudo) continue;
    if (!e.confidence || !e.iteration) {
      bad.push_back("pseudo example without confidence/iteration: " + e.sentence_id);
      continue;
    }
    if (!(*e.confidence > tau[e.label])) bad.push_back("pseudo confidence not above tau: " + e.sentence_id);
    if (*e.iteration < 1 || *e.iteration > final_state.iteration) bad.push_back("pseudo iteration out of range: " + e.sentence_id);
  }
  return bad;
}

}  // namespace clausefair::testing
