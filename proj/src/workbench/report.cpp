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

#include "clausefair/workbench/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace clausefair::workbench {

namespace {

constexpr std::string_view kAccuracy = "Accuracy";

std::string fixed(double v, int decimals) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string cell(const std::string& column, double v) {
  if (column == kAccuracy) return fixed(100.0 * v, 1) + "%";
  return fixed(v, 2);
}

}  // namespace

ResultsTable report(std::span<const RunRecord> records, bool extended) {
  ResultsTable t;
  t.extended = extended;
  t.columns = {"Model", "Technique"};
  if (extended) {
    for (Label l : kAllLabels) {
      const std::string name(display_name(l));
      for (const char* m : {" P", " R", " F1"}) t.columns.push_back(name + m);
    }
    for (const char* m : {"Macro P", "Macro R", "Macro F1"}) t.columns.emplace_back(m);
  } else {
    for (Label l : kAllLabels) t.columns.push_back(std::string(display_name(l)) + " F1");
    t.columns.emplace_back("Macro F1");
    t.columns.emplace_back(kAccuracy);
  }

  std::map<std::string, int> seen;
  for (const auto& r : records) {
    const int n = ++seen[r.name];
    t.names.push_back(n == 1 ? r.name : r.name + "#" + std::to_string(n));
    t.models.push_back(n == 1 ? r.model : r.model + "#" + std::to_string(n));
    t.techniques.emplace_back(display_name(r.technique));
    const auto& m = r.metrics;
    std::vector<double> row;
    if (extended) {
      for (Label l : kAllLabels) {
        row.push_back(m[l].precision);
        row.push_back(m[l].recall);
        row.push_back(m[l].f1);
      }
      row.insert(row.end(), {m.macro_precision, m.macro_recall, m.macro_f1});
    } else {
      for (Label l : kAllLabels) row.push_back(m[l].f1);
      row.insert(row.end(), {m.macro_f1, m.accuracy});
    }
    t.values.push_back(std::move(row));
  }
  return t;
}

std::string render_text(const ResultsTable& table) {
  std::vector<std::vector<std::string>> grid{table.columns};
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    std::vector<std::string> row{table.models[i], table.techniques[i]};
    for (std::size_t k = 0; k < table.values[i].size(); ++k) {
      row.push_back(cell(table.columns[k + 2], table.values[i][k]));
    }
    grid.push_back(std::move(row));
  }
  std::vector<std::size_t> width(table.columns.size(), 0);
  for (const auto& row : grid) {
    for (std::size_t k = 0; k < row.size(); ++k) width[k] = std::max(width[k], row[k].size());
  }
  std::string out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k > 0) out += " | ";
      out += row[k];
      if (k + 1 < row.size()) out.append(width[k] - row[k].size(), ' ');
    }
    out += "\n";
  };
  emit(grid.front());
  for (std::size_t k = 0; k < width.size(); ++k) {
    if (k > 0) out += "-|-";
    out.append(width[k], '-');
  }
  out += "\n";
  for (std::size_t i = 1; i < grid.size(); ++i) emit(grid[i]);
  return out;
}

nlohmann::json to_json(const ResultsTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    nlohmann::json row{{"name", table.names[i]}, {"Model", table.models[i]}, {"Technique", table.techniques[i]}};
    for (std::size_t k = 0; k < table.values[i].size(); ++k) row[table.columns[k + 2]] = table.values[i][k];
    rows.push_back(std::move(row));
  }
  return {{"columns", table.columns}, {"rows", rows}, {"extended", table.extended}};
}

}  // namespace clausefair::workbench
