// Copyright 2026 The sigbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SIGBENCH_OUTPUT_H_
#define SIGBENCH_OUTPUT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sigbench/harness.h"

namespace sigbench {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Formats a double with enough digits for the report and stable across runs.
std::string FormatNumber(double value);

struct LabeledSummary {
  std::string algorithm;
  std::string matrix_id;  // "0" for the climbing game, "all" when pooled
  AggregateSummary summary;
};

std::string CurvesCsv(const std::vector<LabeledSummary>& summaries);
std::string CountsCsv(const AggregateSummary& summary);
std::string PartitionsCsv(const AggregateSummary& summary);
std::string BoxplotCsv(const AggregateSummary& summary);

// Per-algorithm block of summary.json.
nlohmann::ordered_json SummaryJson(const AggregateSummary& summary);

// Writes `contents` to `path`, creating parent directories. Throws
// std::runtime_error on I/O failure.
void WriteFile(const std::filesystem::path& path, std::string_view contents);

// curves.csv at the top level; counts, partitions and boxplot files under
// <dir>/<algorithm>/.
void WriteExperimentFiles(const std::filesystem::path& dir,
                          const std::vector<LabeledSummary>& summaries);

}  // namespace sigbench

#endif  // SIGBENCH_OUTPUT_H_
