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

#include "fixtures.hpp"

#include <array>
#include <set>
#include <sstream>

#include <json.hpp>

#include "clausefair/util.hpp"

namespace clausefair::fixtures {

using nlohmann::json;

namespace {

const std::array<std::array<std::string, kCuesPerClass>, kNumLabels> kCues{{
    {"within thirty (30) days of a written request",
     "at the rates listed in Schedule B",
     "as agreed by both parties in writing",
     "after the joint acceptance test is signed",
     "according to the approved project plan",
     "on the first business day of each calendar month",
     "using the escrow arrangement described in Annex C",
     "with costs shared equally between them",
     "following the governance meeting minutes",
     "under the mutually signed statement of work",
     "before the quarterly steering committee review",
     "in line with the published maintenance calendar"},
    {"promptly upon request",
     "using commercially reasonable efforts",
     "to an appropriate standard commensurate with the risk",
     "as soon as practicable",
     "in a timely manner",
     "with adequate resources",
     "where deemed necessary",
     "to a satisfactory level",
     "consistent with good industry practice",
     "without undue delay",
     "as reasonably required from time to time",
     "in a manner acceptable to the other side"},
    {"at its sole discretion",
     "without prior notice",
     "with or without cause",
     "and waives any right to object",
     "while the other party bears all resulting costs",
     "and may terminate this agreement unilaterally",
     "with no liability whatsoever",
     "and may amend these terms at any time",
     "in the courts of its own choosing",
     "and shall have no obligation to indemnify",
     "under a governing law it alone selects",
     "through arbitration before an arbitrator it appoints"},
}};

const std::array<std::string, 12> kSubjects{
    "Supplier", "Customer", "Vendor", "Purchaser", "Licensor", "Licensee",
    "Provider", "Recipient", "Contractor", "Company", "Client", "Service Provider"};

const std::array<std::string, 10> kVerbs{
    "deliver", "maintain", "update", "review", "install",
    "configure", "document", "test", "support", "replace"};

const std::array<std::string, 10> kObjects{
    "the deliverables", "the services", "the software", "the equipment",
    "the project documentation", "the hosting environment", "the support services",
    "the data migration", "the training materials", "the test reports"};

std::string jsonl(const std::vector<json>& lines) {
  std::string out;
  for (const auto& j : lines) out += j.dump() + "\n";
  return out;
}

json example_json(const std::string& id, const std::string& text, Label label, Provenance p = Provenance::HumanAgreed) {
  LabeledExample e;
  e.sentence_id = id;
  e.text = text;
  e.label = label;
  e.provenance = p;
  e.verified = p == Provenance::Synthetic;
  return e;
}

std::string numbered(const std::string& prefix, int n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d", n);
  return prefix + buf;
}

// Draws sentences until one not seen before comes up.
class UniqueSource {
 public:
  explicit UniqueSource(std::uint64_t seed) : factory_(seed) {}

  std::string make(Label a_label, int a, Label b_label, int b) {
    for (;;) {
      auto s = factory_.make(a_label, a, b_label, b);
      if (seen_.insert(to_lower(s)).second) return s;
    }
  }
  std::mt19937_64& rng() { return factory_.rng(); }
  void reserve(const std::string& text) { seen_.insert(to_lower(text)); }

 private:
  SentenceFactory factory_;
  std::set<std::string> seen_;
};

// Two distinct cues of `label` drawn from the first `range` cues.
std::pair<int, int> cue_pair(std::mt19937_64& rng, int range) {
  const int a = static_cast<int>(draw(rng, static_cast<std::size_t>(range)));
  int b = static_cast<int>(draw(rng, static_cast<std::size_t>(range - 1)));
  if (b >= a) ++b;
  return {a, b};
}

// Sentence whose first cue is from `label`; the second cue comes from another
// class with probability `noise`.
std::string noisy_sentence(UniqueSource& src, Label label, double noise) {
  auto& rng = src.rng();
  const auto [a, b] = cue_pair(rng, kCuesPerClass);
  Label other = label;
  if (static_cast<double>(draw(rng, 1000)) < noise * 1000.0) {
    other = label_at((index_of(label) + 1 + draw(rng, kNumLabels - 1)) % kNumLabels);
  }
  return src.make(label, a, other, b);
}

std::vector<Label> label_sequence(const std::array<std::size_t, kNumLabels>& counts, std::mt19937_64& rng) {
  std::vector<Label> out;
  for (Label l : kAllLabels) out.insert(out.end(), counts[index_of(l)], l);
  seeded_shuffle(out, rng);
  return out;
}

struct Scenario {
  const char* template_id;
  const char* reason;  // distinguishes the rendered task line
  std::array<int, 2> cues;
  const char* format;  // bracketed | numbered | json
};

const std::array<Scenario, 6> kScenarios{{
    {"augment-unilateral-termination", "due to unilateral termination rights", {5, 2}, "bracketed"},
    {"augment-unilateral-change", "due to unilateral modification rights", {7, 0}, "numbered"},
    {"augment-jurisdiction", "due to one-sided jurisdiction restrictions", {8, 3}, "json"},
    {"augment-choice-of-law", "due to one-sided choice of governing law", {10, 0}, "numbered"},
    {"augment-indemnity", "due to one-sided indemnity restrictions", {9, 4}, "bracketed"},
    {"augment-arbitration", "due to one-sided arbitration terms", {11, 6}, "numbered"},
}};

std::string format_list(const std::vector<std::string>& items, const std::string& style) {
  std::string out;
  if (style == "json") {
    out = "<List of Sentences>: " + json(items).dump();
  } else if (style == "bracketed") {
    out = "<List of Sentences>: [";
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
    out += "]";
  } else {
    out = "Here are the sentences:\n";
    for (std::size_t i = 0; i < items.size(); ++i) out += std::to_string(i + 1) + ". " + items[i] + "\n";
  }
  return out;
}

const std::array<std::string, kNumLabels> kCotReasons{
    "The given sentence sets out an obligation with clear boundaries that applies in the same way to both parties. "
    "It is neither clearly unfair nor potentially unfair.",
    "The given sentence imposes an obligation, but its implementation boundaries are unclear because of vague terms, "
    "which introduces a risk of non-compliance. It does not create a clear imbalance.",
    "The given sentence gives one party rights that the other party does not have, which creates an imbalance "
    "between the parties.",
};

}  // namespace

std::size_t draw(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t range = n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  for (;;) {
    const std::uint64_t v = rng();
    if (v < limit) return static_cast<std::size_t>(v % range);
  }
}

const std::string& cue(Label label, int index) { return kCues[index_of(label)][static_cast<std::size_t>(index)]; }

SentenceFactory::SentenceFactory(std::uint64_t seed) : rng_(seed) {}

std::string SentenceFactory::make(Label label, int a, Label label_b, int b) {
  const auto& subject = kSubjects[draw(rng_, kSubjects.size())];
  const auto& verb = kVerbs[draw(rng_, kVerbs.size())];
  const auto& object = kObjects[draw(rng_, kObjects.size())];
  std::string first = cue(label, a);
  std::string second = cue(label_b, b);
  if (draw(rng_, 2) == 1) std::swap(first, second);
  return subject + " shall " + verb + " " + object + " " + first + ", " + second + ".";
}

FileSet selftrain_fixture() {
  UniqueSource src(20260101);
  FileSet files;
  std::vector<json> labeled;
  int n = 0;
  for (Label l : kAllLabels) {
    for (int i = 0; i < 20; ++i) {
      const auto [a, b] = cue_pair(src.rng(), 4);
      labeled.push_back(example_json(numbered("st/lab/", ++n), src.make(l, a, l, b), l));
    }
  }
  files["selftrain/labeled.jsonl"] = jsonl(labeled);

  auto open_set = [&](const std::string& prefix, std::size_t per_class, bool with_labels) {
    std::vector<json> out;
    const auto labels = label_sequence({per_class, per_class, per_class}, src.rng());
    int k = 0;
    for (Label l : labels) {
      const auto [a, b] = cue_pair(src.rng(), kCuesPerClass);
      const auto text = src.make(l, a, l, b);
      const auto id = numbered(prefix, ++k);
      out.push_back(with_labels ? example_json(id, text, l) : json{{"sentence_id", id}, {"text", text}});
    }
    return out;
  };
  files["selftrain/unlabeled.jsonl"] = jsonl(open_set("st/unl/", 100, false));
  files["selftrain/validation.jsonl"] = jsonl(open_set("st/val/", 30, true));
  files["selftrain/test.jsonl"] = jsonl(open_set("st/test/", 30, true));
  return files;
}

FileSet augment_fixture() {
  UniqueSource src(20260202);
  FileSet files;
  std::vector<json> pool;
  std::string first_cu;
  int n = 0;
  for (Label l : label_sequence({401, 165, 34}, src.rng())) {
    const auto text = noisy_sentence(src, l, 0.15);
    if (l == Label::ClearlyUnfair && first_cu.empty()) first_cu = text;
    pool.push_back(example_json(numbered("aug/", ++n), text, l));
  }
  files["augment/pool.jsonl"] = jsonl(pool);

  std::vector<json> script;
  std::vector<json> reviews;
  std::vector<json> synthetic;
  for (std::size_t s = 0; s < kScenarios.size(); ++s) {
    const auto& sc = kScenarios[s];
    std::vector<std::string> items;
    for (int i = 0; i < 25; ++i) {
      const int lead = sc.cues[static_cast<std::size_t>(i % 2)];
      int other = static_cast<int>(draw(src.rng(), kCuesPerClass - 1));
      if (other >= lead) ++other;
      items.push_back(src.make(Label::ClearlyUnfair, lead, Label::ClearlyUnfair, other));
    }
    // One repeat inside a batch and one copy of a pool sentence; dedup
    // removes both.
    if (s == 1) items[7] = to_lower(items[3]);
    if (s == 4) items[12] = first_cu;
    script.push_back(json{{"contains", sc.reason}, {"response", format_list(items, sc.format)}});

    // Mirror of dedup, so the review indices line up with the batch.
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if ((s == 1 && i == 7) || (s == 4 && i == 12)) continue;
      kept.push_back(items[i]);
    }
    for (std::size_t i = 0; i < kept.size(); ++i) {
      const bool reject = (s == 0 && i == 4) || (s == 2 && i == 10) || (s == 5 && i == 20);
      if (reject) {
        reviews.push_back(json{{"template_id", sc.template_id}, {"index", i}, {"reviewer_id", "reviewer-a"}, {"accept", false}});
        continue;
      }
      for (const char* r : {"reviewer-a", "reviewer-b"}) {
        reviews.push_back(json{{"template_id", sc.template_id}, {"index", i}, {"reviewer_id", r}, {"accept", true}});
      }
      synthetic.push_back(example_json("syn/" + std::string(sc.template_id) + "/" + std::to_string(i), kept[i],
                                       Label::ClearlyUnfair, Provenance::Synthetic));
    }
  }
  files["augment/script.jsonl"] = jsonl(script);
  files["augment/reviews.jsonl"] = jsonl(reviews);
  files["augment/synthetic.jsonl"] = jsonl(synthetic);
  return files;
}

FileSet experiment_fixture() {
  UniqueSource src(20260303);
  FileSet files;
  std::vector<json> labeled;
  std::vector<json> direct;
  std::vector<json> cot;
  int n = 0;
  for (Label l : label_sequence({800, 322, 78}, src.rng())) {
    const auto id = numbered("exp/", ++n);
    const auto text = noisy_sentence(src, l, 0.2);
    labeled.push_back(example_json(id, text, l));

    // Simulated models: direct answers are right about 63% of the time and
    // chain-of-thought about 75%, with a few unusable replies.
    for (const auto& [kind, correct_per_mille, out] :
         {std::tuple<std::string, std::uint64_t, std::vector<json>*>{"direct", 630, &direct}, {"cot", 750, &cot}}) {
      const std::uint64_t h = fnv1a64(id + "/" + kind) % 1000;
      std::string response;
      if (h < 15) {
        response = "I cannot determine the category of this sentence without more context.";
      } else {
        Label said = l;
        if (h >= 15 + correct_per_mille) said = label_at((index_of(l) + 1 + (h % 2)) % kNumLabels);
        if (kind == "direct") {
          response = "Answer: " + std::string(display_name(said));
        } else {
          response = kCotReasons[index_of(said)] + " Therefore, the sentence is " + std::string(display_name(said)) + ".";
        }
      }
      out->push_back(json{{"input", text}, {"response", response}});
    }
  }
  files["experiment/labeled.jsonl"] = jsonl(labeled);
  files["experiment/direct_script.jsonl"] = jsonl(direct);
  files["experiment/cot_script.jsonl"] = jsonl(cot);

  std::vector<json> unlabeled;
  n = 0;
  for (Label l : label_sequence({400, 161, 39}, src.rng())) {
    unlabeled.push_back(json{{"sentence_id", numbered("exp/u/", ++n)}, {"text", noisy_sentence(src, l, 0.2)}});
  }
  files["experiment/unlabeled.jsonl"] = jsonl(unlabeled);
  return files;
}

FileSet all_fixtures() {
  FileSet all;
  for (auto&& set : {selftrain_fixture(), augment_fixture(), experiment_fixture()}) {
    all.insert(set.begin(), set.end());
  }
  return all;
}

void write_fixtures(const FileSet& files, const std::filesystem::path& root) {
  for (const auto& [rel, content] : files) write_file_atomic(root / rel, content);
}

}  // namespace clausefair::fixtures
