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
#include <random>

#include "clausefair/corpus/document.hpp"
#include "clausefair/corpus/sentences.hpp"
#include "clausefair/corpus/split.hpp"
#include "clausefair/corpus/store.hpp"
#include "clausefair/error.hpp"
#include "clausefair/util.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace clausefair;
using namespace clausefair::corpus;
using clausefair::testing::TempDir;

namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

std::vector<LabeledExample> corpus_with_counts(std::array<std::size_t, 3> counts, const std::string& prefix = "s") {
  std::vector<LabeledExample> out;
  int n = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < counts[k]; ++i) {
      out.push_back({prefix + std::to_string(n++), "text", label_at(k), Provenance::HumanAgreed, {}, {}, false});
    }
  }
  return out;
}

std::array<std::array<std::size_t, 3>, 3> per_class(const DatasetSplit& split,
                                                    const std::vector<LabeledExample>& examples) {
  std::array<std::array<std::size_t, 3>, 3> out{};
  for (const auto& e : examples) {
    for (std::size_t b = 0; b < 3; ++b) {
      if (split.bucket(static_cast<Bucket>(b)).contains(e.sentence_id)) ++out[b][index_of(e.label)];
    }
  }
  return out;
}

}  // namespace

TEST_CASE("ingest_html attaches clauses to heading sections in order") {
  const auto doc = ingest_html(
      "<html><body><h2>Payment</h2><p>Buyer shall pay net 30.</p><p>Late fees apply.</p>"
      "<h2>Termination</h2><p>Either party may terminate on notice.</p></body></html>",
      "d1");
  REQUIRE(doc.sections.size() == 2);
  CHECK(doc.sections[0].heading == "Payment");
  CHECK(doc.sections[0].clauses == std::vector<std::string>{"Buyer shall pay net 30.", "Late fees apply."});
  CHECK(doc.sections[1].heading == "Termination");
  CHECK(doc.sections[1].clauses == std::vector<std::string>{"Either party may terminate on notice."});
  CHECK(doc.doc_id == "d1");
}

TEST_CASE("ingest_html without headings yields one untitled section") {
  const auto doc = ingest_html("<html><body><p>Supplier shall deliver monthly.</p></body></html>", "d2");
  REQUIRE(doc.sections.size() == 1);
  CHECK(doc.sections[0].heading == kUntitledHeading);
}

TEST_CASE("ingest_html tolerates tag soup and rejects empty documents") {
  const auto doc = ingest_html("<h2>Fees<p>Fees are due &amp; payable<br>monthly.", "d3");
  REQUIRE(doc.sections.size() == 1);
  CHECK(doc.sections[0].heading == "Fees");
  CHECK(doc.sections[0].clauses == std::vector<std::string>{"Fees are due & payable monthly."});
  CHECK(code_of([] { ingest_html("<html></html>", "e"); }) == ErrorCode::EmptyDocument);
  CHECK(code_of([] { ingest_html("<html><body>   </body></html>", "e"); }) == ErrorCode::EmptyDocument);
}

TEST_CASE("splitter separates on periods") {
  const SentenceSplitter splitter;
  CHECK(splitter.split("Supplier shall deliver monthly. Buyer shall pay net 30.") ==
        std::vector<std::string>{"Supplier shall deliver monthly.", "Buyer shall pay net 30."});
  CHECK(splitter.split("").empty());
}

TEST_CASE("splitter keeps abbreviations and parenthetical numbers together") {
  const SentenceSplitter splitter;
  CHECK(splitter.split("Payment due within thirty (30) days, e.g. by wire.").size() == 1);
  CHECK(splitter.split("See Sec. 4 and No. 7 for details, i.e. the annex.").size() == 1);
}

TEST_CASE("extract_sentences numbers positions and flags redactions") {
  ContractDocument doc{"d", "", "", {{"Fees", {"Supplier shall deliver monthly. Buyer shall pay net 30.",
                                               "Fees are set forth in Exhibit [***] hereto."}}}};
  const auto sentences = extract_sentences(doc);
  REQUIRE(sentences.size() == 3);
  CHECK(sentences[0].position == 0);
  CHECK(sentences[1].position == 1);
  CHECK_FALSE(sentences[0].redacted);
  CHECK(sentences[2].redacted);
  std::set<std::string> ids;
  for (const auto& s : sentences) ids.insert(s.sentence_id);
  CHECK(ids.size() == 3);
}

TEST_CASE("redaction detector default patterns") {
  const RedactionDetector r;
  CHECK(r.is_redacted("Fees are set forth in Exhibit [***] hereto."));
  CHECK(r.is_redacted("Price: [REDACTED] per unit."));
  CHECK(r.is_redacted("Account XXXX will be charged."));
  CHECK_FALSE(r.is_redacted("Buyer shall pay net 30."));
}

TEST_CASE("apportion matches integer largest remainder") {
  CHECK(apportion(800, {0.5, 0.2, 0.3}) == std::array<std::size_t, 3>{400, 160, 240});
  CHECK(apportion(322, {0.5, 0.2, 0.3}) == std::array<std::size_t, 3>{161, 64, 97});
  CHECK(apportion(78, {0.5, 0.2, 0.3}) == std::array<std::size_t, 3>{39, 16, 23});
  std::mt19937_64 rng(5);
  for (int t = 0; t < 500; ++t) {
    const std::size_t count = rng() % 1000;
    int a = int(rng() % 1001);
    int b = int(rng() % std::size_t(1001 - a));
    const std::array<int, 3> pm{a, b, 1000 - a - b};
    const auto got = apportion(count, {a / 1000.0, b / 1000.0, (1000 - a - b) / 1000.0});
    CHECK(got == clausefair::testing::oracle_apportion(count, pm));
  }
}

TEST_CASE("stratified split of 800/322/78") {
  const auto ex = corpus_with_counts({800, 322, 78});
  const auto split = stratified_split(ex, SplitConfig{{0.5, 0.2, 0.3}, 11});
  const auto pc = per_class(split, ex);
  CHECK(pc[0] == std::array<std::size_t, 3>{400, 161, 39});
  CHECK(pc[1] == std::array<std::size_t, 3>{160, 64, 16});
  CHECK(pc[2] == std::array<std::size_t, 3>{240, 97, 23});
  CHECK(split.train.size() + split.validation.size() + split.test.size() == 1200);
}

TEST_CASE("degenerate ratios put everything in train") {
  const auto ex = corpus_with_counts({5, 3, 2});
  const auto split = stratified_split(ex, SplitConfig{{1, 0, 0}, 1});
  CHECK(split.train.size() == 10);
  CHECK(split.validation.empty());
  CHECK(split.test.empty());
}

TEST_CASE("split errors") {
  const auto ex = corpus_with_counts({5, 3, 1});
  CHECK(code_of([&] { stratified_split(ex, SplitConfig{{0.5, 0.2, 0.3}, 1}); }) == ErrorCode::InsufficientClass);
  CHECK(code_of([&] { SplitConfig{{0.5, 0.5, 0.5}, 1}.validate(); }) == ErrorCode::InvalidSplitConfig);
  CHECK(code_of([&] { SplitConfig{{1.2, -0.2, 0}, 1}.validate(); }) == ErrorCode::InvalidSplitConfig);
}

TEST_CASE("split is disjoint, exhaustive and seed deterministic on random corpora") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 50; ++t) {
    const std::array<std::size_t, 3> counts{3 + rng() % 200, 3 + rng() % 100, 3 + rng() % 40};
    auto ex = corpus_with_counts(counts, "c" + std::to_string(t) + "/");
    const SplitConfig cfg{{0.5, 0.2, 0.3}, rng()};
    const auto a = stratified_split(ex, cfg);
    const auto b = stratified_split(ex, cfg);
    CHECK(a.train == b.train);
    CHECK(a.validation == b.validation);
    CHECK(a.test == b.test);
    std::set<std::string> all;
    for (const auto* bucket : {&a.train, &a.validation, &a.test}) {
      for (const auto& id : *bucket) CHECK(all.insert(id).second);
    }
    CHECK(all.size() == ex.size());
    const auto pc = per_class(a, ex);
    for (std::size_t k = 0; k < 3; ++k) {
      for (std::size_t bkt = 0; bkt < 3; ++bkt) {
        CHECK(std::fabs(double(pc[bkt][k]) - double(counts[k]) * cfg.ratios[bkt]) < 1.0);
      }
    }
  }
}

TEST_CASE("store round trip through export and import") {
  TempDir dir("store");
  {
    DatasetStore store(dir / "a");
    for (int i = 0; i < 3; ++i) {
      store.put_sentence({"d/" + std::to_string(i), "d", "Fees", i, "Sentence, \"" + std::to_string(i) + "\".", false});
    }
    store.put_label({"d/0", "", Label::ClearlyUnfair, Provenance::Adjudicated, {}, {}, false});
    store.put_label({"p/1", "Pseudo text.", Label::Fair, Provenance::Pseudo, 0.93, 2, false});
    store.export_to(dir / "out.jsonl", ExportFormat::JsonLines);
  }
  DatasetStore copy(dir / "b");
  copy.import_from(dir / "out.jsonl");
  DatasetStore original(dir / "a");
  CHECK(copy.records() == original.records());
  CHECK(copy.get_label("d/0")->text == "Sentence, \"0\".");
  CHECK(copy.get_label("p/1")->confidence == 0.93);
  CHECK(original.sentences().size() == 3);
}

TEST_CASE("store puts are idempotent and conflicts are rejected") {
  TempDir dir("store");
  DatasetStore store(dir.path());
  const Sentence s{"x/1", "x", "", 0, "Same text.", false};
  store.put_sentence(s);
  store.put_sentence(s);
  CHECK(store.sentences().size() == 1);
  auto other = s;
  other.text = "Different text.";
  CHECK(code_of([&] { store.put_sentence(other); }) == ErrorCode::Conflict);
  CHECK(read_json_lines(dir / "sentences.jsonl").size() == 1);
}

TEST_CASE("redacted sentences never reach exports") {
  TempDir dir("store");
  DatasetStore store(dir.path());
  ContractDocument doc{"d", "", "", {{"Fees", {"Buyer shall pay net 30. Fees are set forth in Exhibit [***] hereto."}}}};
  for (const auto& s : extract_sentences(doc)) {
    store.put_sentence(s);
    store.put_label({s.sentence_id, "", Label::Fair, Provenance::HumanAgreed, {}, {}, false});
  }
  CHECK(store.labeled_examples().size() == 1);
  store.export_to(dir / "out.csv", ExportFormat::Csv);
  const auto csv = read_file(dir / "out.csv");
  CHECK(csv.find("[***]") == std::string::npos);
  CHECK(csv.rfind("sentence_id,doc_id,section_path,text,label,provenance\n", 0) == 0);
  DatasetSplit split;
  for (const auto& s : store.sentences()) split.train.insert(s.sentence_id);
  store.put_split(split);
  CHECK(store.records(Bucket::Train).size() == 1);
}

TEST_CASE("csv escaping") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
}
