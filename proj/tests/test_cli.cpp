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

#include <array>
#include <cstdio>
#include <sys/wait.h>

#include "clausefair/util.hpp"
#include "support/fixture_data.hpp"
#include "support/temp_dir.hpp"

using namespace clausefair;
using namespace clausefair::testing;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(CLAUSEFAIR_CLI) + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) o.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(run("").code == 1);
  CHECK(run("frobnicate").code == 1);
  CHECK(run("annotate --sentence s").code == 1);
}

TEST_CASE("data errors exit 2, external errors exit 3") {
  TempDir dir("cli");
  write_file_atomic(dir / "empty.html", "<html></html>");
  const auto store = "--store " + q(dir / "store");
  CHECK(run(store + " ingest " + q(dir / "empty.html")).code == 2);
  CHECK(run(store + " classify --model missing 'Some sentence.'").code == 2);
  CHECK(run(store + " --llm-url http://127.0.0.1:1/complete prompt-classify --template direct 'A sentence.'").code == 3);
}

TEST_CASE("ingest, annotate, kappa") {
  TempDir dir("cli");
  write_file_atomic(dir / "msa.html", "<h2>Fees</h2><p>Buyer shall pay net 30. Supplier shall deliver monthly.</p>");
  const auto store = "--store " + q(dir / "store");
  auto o = run(store + " ingest " + q(dir / "msa.html"));
  CHECK(o.code == 0);
  const auto sentences = read_json_lines(dir / "store/sentences.jsonl");
  REQUIRE(sentences.size() == 2);
  const std::string sid = sentences[0].at("sentence_id");
  CHECK(run(store + " annotate --sentence " + sid + " --annotator a --label fair").code == 0);
  CHECK(run(store + " annotate --sentence " + sid + " --annotator a --label fair").code == 2);
  CHECK(run(store + " annotate --sentence " + sid + " --annotator b --label bogus").code != 0);
  CHECK(run(store + " annotate --sentence " + sid + " --annotator b --label clearly_unfair").code == 0);
  o = run(store + " adjudicate");
  CHECK(o.code == 0);
  CHECK(o.out.find(sid) != std::string::npos);
  CHECK(run(store + " adjudicate --sentence " + sid + " --adjudicator c --label fair").code == 0);
}

TEST_CASE("train, classify, report") {
  TempDir dir("cli");
  const auto store = "--store " + q(dir / "store");
  const auto cfg = fixture_dir() / "experiment/configs/vanilla.json";
  auto o = run(store + " --config " + q(cfg) + " train");
  CHECK(o.code == 0);
  o = run(store + " classify --model vanilla 'Provider may terminate at any time.'");
  CHECK(o.code == 0);
  o = run(store + " report");
  CHECK(o.code == 0);
  CHECK(o.out.find("Vanilla") != std::string::npos);
  o = run(store + " report --json");
  CHECK(o.code == 0);
  CHECK(nlohmann::json::parse(o.out).at("rows").size() == 1);
  write_file_atomic(dir / "bad.json", R"({"name": "x", "technique": "vanilla"})");
  CHECK(run(store + " --config " + q(dir / "bad.json") + " train").code == 1);
}
