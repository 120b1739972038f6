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

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "clausefair/annotation/annotation.hpp"
#include "clausefair/annotation/checklist.hpp"
#include "clausefair/annotation/kappa.hpp"
#include "clausefair/error.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace clausefair;
using namespace clausefair::annotation;
using clausefair::testing::TempDir;

namespace {

constexpr Label F = Label::Fair;
constexpr Label P = Label::PotentiallyUnfair;
constexpr Label C = Label::ClearlyUnfair;

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

Annotation ann(const std::string& sid, const std::string& who, Label l) {
  return Annotation{sid, who, l, "2026-01-01T00:00:00Z", {}};
}

ChecklistAnswers all_no() {
  ChecklistAnswers a;
  for (int r = 0; r <= static_cast<int>(GuidelineRule::AmbiguityCausesNonCompliance); ++r) {
    a[static_cast<GuidelineRule>(r)] = false;
  }
  return a;
}

}  // namespace

TEST_CASE("assign_batch balances ten sentences over four annotators") {
  std::vector<std::string> ids;
  for (int i = 0; i < 10; ++i) ids.push_back("s" + std::to_string(i));
  const std::vector<std::string> pool{"a", "b", "c", "d"};
  const auto map = assign_batch(ids, pool);
  REQUIRE(map.size() == 10);
  std::map<std::string, int> load;
  for (const auto& [sid, pair] : map) {
    CHECK(pair[0] != pair[1]);
    ++load[pair[0]];
    ++load[pair[1]];
  }
  for (const auto& who : pool) CHECK(load[who] == 5);
}

TEST_CASE("assign_batch load stays within one for any pool") {
  for (std::size_t m = 3; m <= 9; ++m) {
    for (std::size_t n = 1; n <= 40; ++n) {
      std::vector<std::string> ids, pool;
      for (std::size_t i = 0; i < n; ++i) ids.push_back("s" + std::to_string(i));
      for (std::size_t i = 0; i < m; ++i) pool.push_back("a" + std::to_string(i));
      const auto map = assign_batch(ids, pool);
      std::map<std::string, int> load;
      for (const auto& who : pool) load[who] = 0;
      for (const auto& [sid, pair] : map) {
        CHECK(pair[0] != pair[1]);
        ++load[pair[0]];
        ++load[pair[1]];
      }
      int lo = 1 << 30, hi = 0;
      for (const auto& [who, k] : load) {
        lo = std::min(lo, k);
        hi = std::max(hi, k);
      }
      CHECK(hi - lo <= 1);
    }
  }
}

TEST_CASE("assign_batch boundaries") {
  const std::vector<std::string> one{"s"};
  const std::vector<std::string> two{"a", "b"};
  CHECK(code_of([&] { assign_batch(one, two); }) == ErrorCode::PoolTooSmall);
  CHECK(assign_batch({}, two).empty());
}

TEST_CASE("resolve agreement, disagreement and missing annotations") {
  const std::vector<Annotation> agree{ann("s", "a", F), ann("s", "b", F)};
  auto r = resolve("s", agree);
  REQUIRE(std::holds_alternative<LabeledExample>(r));
  CHECK(std::get<LabeledExample>(r).label == F);
  CHECK(std::get<LabeledExample>(r).provenance == Provenance::HumanAgreed);

  const std::vector<Annotation> differ{ann("s", "a", F), ann("s", "b", P)};
  r = resolve("s", differ);
  REQUIRE(std::holds_alternative<AdjudicationRequired>(r));
  CHECK(std::get<AdjudicationRequired>(r).labels == std::pair{F, P});

  const std::vector<Annotation> single{ann("s", "a", F)};
  CHECK(code_of([&] { resolve("s", single); }) == ErrorCode::MissingAnnotations);
}

TEST_CASE("annotation book adjudication flow") {
  AnnotationBook book;
  CHECK(book.submit(ann("s1", "a", F)).status == SubmitStatus::Recorded);
  CHECK(book.submit(ann("s1", "b", C)).status == SubmitStatus::AdjudicationRequired);
  CHECK(book.pending_count() == 1);
  CHECK(book.submit(ann("s2", "a", P)).status == SubmitStatus::Recorded);
  const auto agreed = book.submit(ann("s2", "b", P));
  CHECK(agreed.status == SubmitStatus::Agreed);
  REQUIRE(agreed.example);
  CHECK(agreed.example->provenance == Provenance::HumanAgreed);

  CHECK(code_of([&] { book.adjudicate("s1", "a", C, "t"); }) == ErrorCode::SelfAdjudication);
  CHECK(code_of([&] { book.adjudicate("s2", "c", C, "t"); }) == ErrorCode::NotPending);
  const auto e = book.adjudicate("s1", "c", C, "t");
  CHECK(e.label == C);
  CHECK(e.provenance == Provenance::Adjudicated);
  CHECK(book.pending_count() == 0);
  CHECK(code_of([&] { book.adjudicate("s1", "c", C, "t"); }) == ErrorCode::NotPending);
  CHECK(book.finalized().size() == 2);
  CHECK(book.closed().size() == 1);

  CHECK(code_of([&] { book.submit(ann("s3", "a", F)); book.submit(ann("s3", "a", F)); }) ==
        ErrorCode::DuplicateAnnotation);
  CHECK(code_of([&] { book.submit(ann("s2", "c", F)); }) == ErrorCode::Conflict);
}

TEST_CASE("pending queue size tracks open disagreements") {
  AnnotationBook book;
  std::mt19937_64 rng(3);
  std::size_t open = 0;
  for (int i = 0; i < 60; ++i) {
    const std::string sid = "s" + std::to_string(i);
    const Label a = label_at(rng() % 3), b = label_at(rng() % 3);
    book.submit(ann(sid, "x", a));
    book.submit(ann(sid, "y", b));
    if (a != b) ++open;
    CHECK(book.pending_count() == open);
    if (a != b && rng() % 2 == 0) {
      book.adjudicate(sid, "z", a, "t");
      --open;
      CHECK(book.pending_count() == open);
    }
  }
  for (const auto& e : book.finalized()) {
    const auto anns = book.annotations_for(e.sentence_id);
    REQUIRE(anns.size() == 2);
    CHECK((e.provenance == Provenance::HumanAgreed) == (anns[0].label == anns[1].label));
  }
}

TEST_CASE("journal survives reload") {
  TempDir dir("book");
  {
    AnnotationBook book(dir.path());
    book.submit(ann("s1", "a", F));
    book.submit(ann("s1", "b", P));
    book.submit(ann("s2", "a", F));
    book.submit(ann("s2", "b", P));
    book.adjudicate("s2", "c", P, "t");
  }
  AnnotationBook again(dir.path());
  CHECK(again.pending_count() == 1);
  CHECK(again.closed().size() == 1);
  CHECK(again.annotations().size() == 4);
  CHECK(again.finalized().size() == 1);
}

TEST_CASE("cohen kappa hand cases") {
  using clausefair::testing::to_pairs;
  CHECK(cohen_kappa(to_pairs({0, 1, 2, 2}, {0, 1, 2, 2})) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cohen_kappa(to_pairs({0, 0, 1, 2}, {0, 1, 1, 2})) == doctest::Approx(0.6363636).epsilon(1e-6));
  CHECK(std::fabs(cohen_kappa(to_pairs({0, 0}, {1, 1}))) < 1e-12);
  // One class only on both sides: chance agreement is 1, agreement is 1.
  CHECK(cohen_kappa(to_pairs({2, 2, 2}, {2, 2, 2})) == 1.0);
  CHECK(code_of([] { cohen_kappa({}); }) == ErrorCode::EmptyInput);
}

TEST_CASE("cohen kappa matches the oracle, is symmetric and order invariant") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 40;
    std::vector<int> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = int(rng() % 3);
      b[i] = rng() % 3 == 0 ? int(rng() % 3) : a[i];
    }
    const double k = cohen_kappa(clausefair::testing::to_pairs(a, b));
    CHECK(std::fabs(k - clausefair::testing::oracle_kappa(a, b)) < 1e-9);
    CHECK(std::fabs(k - cohen_kappa(clausefair::testing::to_pairs(b, a))) < 1e-12);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> pa(n), pb(n);
    for (std::size_t i = 0; i < n; ++i) {
      pa[i] = a[perm[i]];
      pb[i] = b[perm[i]];
    }
    CHECK(std::fabs(k - cohen_kappa(clausefair::testing::to_pairs(pa, pb))) < 1e-12);
    CHECK(k <= 1.0);
    CHECK(k >= -1.0);
  }
}

TEST_CASE("checklist decision rules") {
  auto a = all_no();
  a[GuidelineRule::NeitherRightNorObligation] = true;
  CHECK(guideline_checklist("", a).label == F);

  a = all_no();
  a[GuidelineRule::RightWithoutBoundaries] = true;
  a[GuidelineRule::AmbiguityCausesNonCompliance] = true;
  CHECK(guideline_checklist("", a).label == P);

  a = all_no();
  a[GuidelineRule::ClearImbalance] = true;
  auto out = guideline_checklist("", a);
  CHECK(out.label == C);
  CHECK(out.trace == std::vector<std::string>{"clear_imbalance"});

  a = all_no();
  a[GuidelineRule::AmbiguousMaterialObligation] = true;
  CHECK(guideline_checklist("", a).label == F);
  CHECK(guideline_checklist("", a).trace.back() == "ambiguity_immaterial");

  a = all_no();
  a[GuidelineRule::AppliesEquallyToBothParties] = true;
  a[GuidelineRule::ClearImbalance] = true;
  CHECK(guideline_checklist("", a).label == F);

  CHECK(guideline_checklist("", all_no()).trace == std::vector<std::string>{"default_fair"});

  a = all_no();
  a.erase(GuidelineRule::ClearImbalance);
  CHECK(code_of([&] { guideline_checklist("", a); }) == ErrorCode::IncompleteAnswers);
}

TEST_CASE("checklist answers from json") {
  const auto a = checklist_answers_from_json({{"clear_imbalance", true}});
  CHECK(a.at(GuidelineRule::ClearImbalance));
  CHECK(code_of([] { checklist_answers_from_json({{"bogus", true}}); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { checklist_answers_from_json({{"clear_imbalance", 1}}); }) == ErrorCode::ConfigError);
}
