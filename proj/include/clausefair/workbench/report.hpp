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
#include <string>
#include <vector>

#include <json.hpp>

#include "clausefair/workbench/experiment.hpp"

namespace clausefair::workbench {

// One row per run. The standard layout is
//
//   Model | Technique | Fair F1 | Potentially Unfair F1 | Clearly Unfair F1 | Macro F1 | Accuracy
//
// and the extended layout replaces the metrics with precision, recall and F1
// for each class followed by the macro averages (12 metric columns).
struct ResultsTable {
  std::vector<std::string> columns;
  // Row labels: run names, with "#2", "#3", ... appended to repeats.
  std::vector<std::string> names;
  std::vector<std::string> models;
  std::vector<std::string> techniques;
  std::vector<std::vector<double>> values;  // one entry per metric column
  bool extended = false;
};

ResultsTable report(std::span<const RunRecord> records, bool extended = false);

// Pipe-separated text with aligned columns. Scores print with two decimals
// and accuracy as a percentage with one.
std::string render_text(const ResultsTable& table);

// {"columns": [...], "rows": [{"name", "Model", "Technique", <metric>: value, ...}]}
nlohmann::json to_json(const ResultsTable& table);

}  // namespace clausefair::workbench
