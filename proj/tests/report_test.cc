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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sigbench/harness.h"
#include "sigbench/output.h"
#include "sigbench/report.h"

namespace fs = std::filesystem;

namespace sigbench {
namespace {

fs::path FreshDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sigbench_report_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int CountOf(const std::string& text, const std::string& needle) {
  int n = 0;
  for (std::size_t at = text.find(needle); at != std::string::npos;
       at = text.find(needle, at + 1)) {
    ++n;
  }
  return n;
}

std::string ReportErrorOf(const fs::path& in) {
  try {
    RenderReport(in, in / "report");
  } catch (const ReportError& e) {
    return e.what();
  }
  return "";
}

TEST_CASE("number formatting") {
  CHECK(FormatNumber(0.5) == "0.5");
  CHECK(FormatNumber(1.0) == "1");
  CHECK(FormatNumber(1.0 / 3) == "0.3333333333");
}

TEST_CASE("report from a real sweep") {
  const fs::path dir = FreshDir("sweep");
  std::vector<LabeledSummary> summaries;
  for (Algorithm a : {Algorithm::kInfoQ, Algorithm::kIql}) {
    ExperimentConfig ec;
    ec.games = RandomGames(3, 3, 1);
    ec.agent = Preset(a, PresetBank::k3x3);
    ec.episodes = 100;
    ec.eval_every = 50;
    ec.runs_per_matrix = 5;
    summaries.push_back({std::string(AlgorithmName(a)), "all", RunExperiment(ec)});
  }
  WriteExperimentFiles(dir, summaries);
  CHECK(fs::exists(dir / "curves.csv"));
  CHECK(fs::exists(dir / "info-q" / "counts.csv"));
  CHECK(fs::exists(dir / "iql" / "partitions.csv"));
  const std::string boxplot = Slurp(dir / "iql" / "boxplot.csv");
  CHECK(CountOf(boxplot, "\n") == 4);  // header + 3 matrices

  const auto written = RenderReport(dir, dir / "report");
  CHECK(written.size() >= 5);
  const std::string curves = Slurp(dir / "report" / "reward_curves.svg");
  CHECK(CountOf(curves, "<polyline") == 2);
  CHECK(curves.find("<title>info-q</title>") != std::string::npos);
  CHECK(curves.find("<title>iql</title>") != std::string::npos);
  CHECK(curves.find("<polygon") != std::string::npos);
  const std::string box = Slurp(dir / "report" / "boxplot.svg");
  CHECK(box.find("info-q") != std::string::npos);
  CHECK(fs::exists(dir / "report" / "counts_iql.svg"));
  CHECK(fs::exists(dir / "report" / "partitions.svg"));
  fs::remove_all(dir);
}

TEST_CASE("report diagnostics") {
  const fs::path dir = FreshDir("errors");
  CHECK(ReportErrorOf(dir).find("curves.csv") != std::string::npos);
  CHECK(ReportErrorOf(dir / "missing").find("not a directory") != std::string::npos);

  const std::string header =
      "algorithm,matrix_id,episode,mean_raw_reward,mean_norm_reward,stderr,pct_optimal\n";
  std::ofstream(dir / "curves.csv") << header;
  CHECK(ReportErrorOf(dir).find("no data rows") != std::string::npos);

  std::ofstream(dir / "curves.csv") << header << "iql,0,10,0.5,0.5,0.1,0.2\niql,0,20,0.5\n";
  CHECK(ReportErrorOf(dir).find("curves.csv:3:") != std::string::npos);

  std::ofstream(dir / "curves.csv") << header << "iql,0,10,0.5,abc,0.1,0.2\n";
  CHECK(ReportErrorOf(dir).find("curves.csv:2:") != std::string::npos);

  std::ofstream(dir / "curves.csv") << "algo,episode\n";
  CHECK(ReportErrorOf(dir).find("curves.csv:1:") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("csv quoting") {
  const fs::path dir = FreshDir("quote");
  std::ofstream(dir / "p.csv") << "signature,count\n\"{s1,s2}{s3}\",4\n";
  const CsvTable t = ReadCsv(dir / "p.csv", {"signature", "count"});
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0][0] == "{s1,s2}{s3}");
  CHECK(t.lines[0] == 2);
  fs::remove_all(dir);
}

TEST_CASE("svg escaping") {
  const std::string svg = TableSvg("a<b", {"x&y"}, {{"\"q\""}});
  CHECK(svg.find("a&lt;b") != std::string::npos);
  CHECK(svg.find("x&amp;y") != std::string::npos);
  CHECK(svg.find("a<b") == std::string::npos);
}

}  // namespace
}  // namespace sigbench
