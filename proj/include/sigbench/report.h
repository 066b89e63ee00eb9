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

#ifndef SIGBENCH_REPORT_H_
#define SIGBENCH_REPORT_H_

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace sigbench {

// Missing or malformed input; the message carries "file:line: ...".
class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> lines;  // source line of each row
};

// Minimal RFC 4180 reader: quoted fields, no embedded newlines. Checks the
// header and the field count of every row.
CsvTable ReadCsv(const std::filesystem::path& path,
                 const std::vector<std::string>& expected_header);

double CsvNumber(const std::filesystem::path& path, int line,
                 const std::string& field);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> band;  // half-width of a shaded band; may be empty
};

// Line chart with one labeled polyline per series.
std::string LineChartSvg(const std::string& title, const std::string& x_label,
                         const std::string& y_label,
                         const std::vector<Series>& series);

// One box (quartiles, whiskers at min/max) per labeled sample.
std::string BoxplotSvg(const std::string& title,
                       const std::vector<std::pair<std::string, std::vector<double>>>&
                           samples);

// Heat table of counts; rows are states, columns actions.
std::string HeatTableSvg(const std::string& title,
                         const std::vector<std::string>& row_labels,
                         const std::vector<std::string>& col_labels,
                         const std::vector<std::vector<double>>& values);

std::string TableSvg(const std::string& title,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

// Renders every figure for the harness files in `in` into `out`. Returns the
// written file names. Throws ReportError.
std::vector<std::string> RenderReport(const std::filesystem::path& in,
                                      const std::filesystem::path& out);

}  // namespace sigbench

#endif  // SIGBENCH_REPORT_H_
