// Copyright 2026 The wslab Authors.
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

#ifndef WSLAB_EXPERIMENTS_HPP_
#define WSLAB_EXPERIMENTS_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "wslab/config.hpp"

namespace wslab {

// Columnar table written as CSV.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  Table() = default;
  explicit Table(std::vector<std::string> cols) : columns(std::move(cols)) {}
  void add(std::vector<std::string> row);
  std::string to_csv() const;
};

// Cell formatting shared by every table.
std::string cell(double v);
std::string cell(std::size_t v);
std::string cell(const std::string& v);

struct ExperimentReport {
  std::string experiment;
  // Deterministic given the config: no timings, paths or thread counts.
  nlohmann::json summary;
  Table details;
  // File name -> table for external plotting.
  std::map<std::string, Table> plots;
  // Other artifacts (file name -> contents), e.g. a persisted dictionary.
  std::map<std::string, std::string> files;
  std::size_t violations = 0;
  std::vector<std::string> failures;

  void fail(std::string message);
};

// Runs the configured suite. `jobs` only changes scheduling; results are
// identical for every value.
ExperimentReport run_experiment(const ExperimentConfig& cfg, std::size_t jobs = 1);

// Writes summary.json, details.csv and the plot tables into dir.
void write_report(const ExperimentReport& report, const std::filesystem::path& dir);

// Writes only the plot tables (header-only when a table has no rows).
void emit_plot_data(const ExperimentReport& report, const std::filesystem::path& dir);

}  // namespace wslab

#endif  // WSLAB_EXPERIMENTS_HPP_
