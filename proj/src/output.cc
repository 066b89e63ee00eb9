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

#include "sigbench/output.h"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sigbench {

std::string FormatNumber(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

std::string CurvesCsv(const std::vector<LabeledSummary>& summaries) {
  std::string out =
      "algorithm,matrix_id,episode,mean_raw_reward,mean_norm_reward,stderr,"
      "pct_optimal\n";
  for (const LabeledSummary& ls : summaries) {
    for (const CurvePoint& p : ls.summary.curve) {
      out += ls.algorithm + ',' + ls.matrix_id + ',' + std::to_string(p.episode) +
             ',' + FormatNumber(p.mean_raw_reward) + ',' +
             FormatNumber(p.mean_norm_reward) + ',' +
             FormatNumber(p.stderr_norm_reward) + ',' +
             FormatNumber(p.pct_optimal) + '\n';
    }
  }
  return out;
}

std::string CountsCsv(const AggregateSummary& summary) {
  std::string out = "state,action,count\n";
  for (int s = 0; s < summary.counts.rows(); ++s) {
    for (int a = 0; a < summary.counts.cols(); ++a) {
      out += "s" + std::to_string(s + 1) + ",a" + std::to_string(a + 1) + ',' +
             std::to_string(static_cast<long long>(summary.counts(s, a))) + '\n';
    }
  }
  return out;
}

std::string PartitionsCsv(const AggregateSummary& summary) {
  std::string out = "signature,count\n";
  for (const auto& [signature, count] : summary.partitions) {
    out += '"' + signature + "\"," + std::to_string(count) + '\n';
  }
  return out;
}

std::string BoxplotCsv(const AggregateSummary& summary) {
  std::string out = "matrix_id,pct_optimal\n";
  for (std::size_t i = 0; i < summary.matrix_pct_optimal.size(); ++i) {
    out += std::to_string(i) + ',' + FormatNumber(summary.matrix_pct_optimal[i]) +
           '\n';
  }
  return out;
}

nlohmann::ordered_json SummaryJson(const AggregateSummary& summary) {
  const CurvePoint& last = summary.final_point();
  nlohmann::ordered_json j;
  j["runs"] = summary.runs;
  j["failures"] = summary.failures;
  j["failure_messages"] = summary.failure_messages;
  j["optimal_runs"] = summary.optimal_runs;
  j["final_pct_optimal"] = last.pct_optimal;
  j["final_mean_raw_reward"] = last.mean_raw_reward;
  j["final_mean_norm_reward"] = last.mean_norm_reward;
  j["final_stderr_norm_reward"] = last.stderr_norm_reward;
  j["final_greedy_norm_reward"] = last.mean_greedy_reward;
  j["injective_fraction"] = summary.injective_fraction;
  j["converged_runs"] = summary.converged_runs;
  j["mean_episodes_to_optimal"] = summary.mean_episodes_to_optimal;
  j["matrix_pct_optimal"] = {{"min", summary.matrix_box.min},
                             {"q1", summary.matrix_box.q1},
                             {"median", summary.matrix_box.median},
                             {"q3", summary.matrix_box.q3},
                             {"max", summary.matrix_box.max}};
  return j;
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw std::runtime_error("cannot create directory " +
                               path.parent_path().string() + ": " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

void WriteExperimentFiles(const std::filesystem::path& dir,
                          const std::vector<LabeledSummary>& summaries) {
  WriteFile(dir / "curves.csv", CurvesCsv(summaries));
  for (const LabeledSummary& ls : summaries) {
    const std::filesystem::path sub = dir / ls.algorithm;
    WriteFile(sub / "counts.csv", CountsCsv(ls.summary));
    WriteFile(sub / "partitions.csv", PartitionsCsv(ls.summary));
    WriteFile(sub / "boxplot.csv", BoxplotCsv(ls.summary));
  }
}

}  // namespace sigbench
