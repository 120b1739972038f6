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
#include <map>
#include <random>
#include <string>
#include <vector>

#include "clausefair/label.hpp"
#include "clausefair/labeled_example.hpp"

// Deterministic synthetic corpora for tests, the acceptance run and the
// README walkthrough. Sentences are built from a neutral frame plus class cue
// phrases, so a bag-of-ngrams model can only learn the class from the cues.
namespace clausefair::fixtures {

inline constexpr int kCuesPerClass = 12;

// Uniform integer in [0, n) from raw engine draws; unlike the standard
// distributions the sequence is identical on every platform.
std::size_t draw(std::mt19937_64& rng, std::size_t n);

class SentenceFactory {
 public:
  explicit SentenceFactory(std::uint64_t seed);

  // A sentence carrying cue `a` of `label` and cue `b` of `label_b`.
  std::string make(Label label, int a, Label label_b, int b);
  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

const std::string& cue(Label label, int index);

// Relative path -> file content.
using FileSet = std::map<std::string, std::string>;

// selftrain/{labeled,unlabeled,validation,test}.jsonl
//   60 labeled examples that only use the first four cues of each class;
//   300 unlabeled, 90 validation and 90 test sentences that draw two cues
//   from all twelve.
FileSet selftrain_fixture();

// augment/{pool,script,reviews,synthetic}.jsonl
//   A 401/165/34 training pool, a scripted reply of 25 sentences for each of
//   the six augmentation templates (two of them duplicates), review decisions
//   that verify 145 candidates, and the resulting synthetic examples.
FileSet augment_fixture();

// experiment/{labeled,unlabeled,direct_script,cot_script}.jsonl
//   A 1200 sentence corpus with 800/322/78 class counts, 600 unlabeled
//   sentences, and scripted LLM replies for every corpus sentence.
FileSet experiment_fixture();

FileSet all_fixtures();
void write_fixtures(const FileSet& files, const std::filesystem::path& root);

}  // namespace clausefair::fixtures
