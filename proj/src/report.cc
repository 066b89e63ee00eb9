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

#include "sigbench/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "sigbench/harness.h"
#include "sigbench/output.h"

namespace sigbench {
namespace {

namespace fs = std::filesystem;

constexpr double kWidth = 760;
constexpr double kHeight = 460;
constexpr double kLeft = 70;
constexpr double kRight = 190;
constexpr double kTop = 40;
constexpr double kBottom = 60;
// Most frequent signatures per algorithm drawn in the SVG table.
constexpr std::size_t kMaxPartitionRows = 12;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                "#bcbd22", "#17becf"};

std::string Color(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string Escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string Header(double width, double height, const std::string& title) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
    << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
    << "font-size=\"15\">" << Escape(title) << "</text>\n";
  return s.str();
}

std::string TickLabel(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Axis frame with five ticks on each axis.
struct Frame {
  double x0, x1, y0, y1;

  double X(double v) const {
    const double span = x1 > x0 ? x1 - x0 : 1.0;
    return kLeft + (v - x0) / span * (kWidth - kLeft - kRight);
  }
  double Y(double v) const {
    const double span = y1 > y0 ? y1 - y0 : 1.0;
    return kHeight - kBottom - (v - y0) / span * (kHeight - kTop - kBottom);
  }

  std::string Render(const std::string& x_label, const std::string& y_label) const {
    std::ostringstream s;
    const double bottom = kHeight - kBottom;
    const double right = kWidth - kRight;
    s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
      << right - kLeft << "\" height=\"" << bottom - kTop
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int i = 0; i <= 4; ++i) {
      const double xv = x0 + (x1 - x0) * i / 4.0;
      const double yv = y0 + (y1 - y0) * i / 4.0;
      s << "<line x1=\"" << Num(X(xv)) << "\" y1=\"" << bottom << "\" x2=\""
        << Num(X(xv)) << "\" y2=\"" << bottom + 5 << "\" stroke=\"#444\"/>\n"
        << "<text x=\"" << Num(X(xv)) << "\" y=\"" << bottom + 18
        << "\" text-anchor=\"middle\">" << TickLabel(xv) << "</text>\n"
        << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << Num(Y(yv)) << "\" x2=\""
        << kLeft << "\" y2=\"" << Num(Y(yv)) << "\" stroke=\"#444\"/>\n"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << Num(Y(yv) + 4)
        << "\" text-anchor=\"end\">" << TickLabel(yv) << "</text>\n";
    }
    s << "<text x=\"" << (kLeft + right) / 2 << "\" y=\"" << kHeight - 15
      << "\" text-anchor=\"middle\">" << Escape(x_label) << "</text>\n"
      << "<text transform=\"translate(18," << (kTop + bottom) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << Escape(y_label)
      << "</text>\n";
    return s.str();
  }
};

std::string Legend(const std::vector<std::string>& labels) {
  std::ostringstream s;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double y = kTop + 10 + 20.0 * i;
    s << "<rect x=\"" << kWidth - kRight + 15 << "\" y=\"" << y - 9
      << "\" width=\"14\" height=\"10\" fill=\"" << Color(i) << "\"/>\n"
      << "<text x=\"" << kWidth - kRight + 35 << "\" y=\"" << y << "\">"
      << Escape(labels[i]) << "</text>\n";
  }
  return s.str();
}

std::vector<std::string> SplitCsvLine(const std::string& line, bool* ok) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  *ok = true;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) *ok = false;
  return fields;
}

[[noreturn]] void Fail(const fs::path& path, int line, const std::string& message) {
  throw ReportError(path.string() + ':' + std::to_string(line) + ": " + message);
}

void Save(const fs::path& path, const std::string& contents,
          std::vector<std::string>* written) {
  WriteFile(path, contents);
  written->push_back(path.filename().string());
}

}  // namespace

CsvTable ReadCsv(const fs::path& path, const std::vector<std::string>& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(path, 0, "cannot open file");
  CsvTable table;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool ok = true;
    std::vector<std::string> fields = SplitCsvLine(line, &ok);
    if (!ok) Fail(path, number, "unterminated quoted field");
    if (number == 1) {
      if (fields != expected) {
        std::string want;
        for (const std::string& h : expected) want += (want.empty() ? "" : ",") + h;
        Fail(path, number, "unexpected header; want '" + want + "'");
      }
      table.header = std::move(fields);
      continue;
    }
    if (line.empty()) Fail(path, number, "empty line");
    if (fields.size() != expected.size()) {
      Fail(path, number, "expected " + std::to_string(expected.size()) +
                             " fields, found " + std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
    table.lines.push_back(number);
  }
  if (number == 0) Fail(path, 1, "file is empty");
  return table;
}

double CsvNumber(const fs::path& path, int line, const std::string& field) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != field.size() || !std::isfinite(v)) {
    Fail(path, line, "not a finite number: '" + field + "'");
  }
  return v;
}

std::string LineChartSvg(const std::string& title, const std::string& x_label,
                         const std::string& y_label,
                         const std::vector<Series>& series) {
  Frame f{0, 1, 0, 1};
  bool first = true;
  for (const Series& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double band = s.band.empty() ? 0.0 : s.band[i];
      if (first) {
        f = {s.x[i], s.x[i], s.y[i] - band, s.y[i] + band};
        first = false;
      }
      f.x0 = std::min(f.x0, s.x[i]);
      f.x1 = std::max(f.x1, s.x[i]);
      f.y0 = std::min(f.y0, s.y[i] - band);
      f.y1 = std::max(f.y1, s.y[i] + band);
    }
  }
  f.x0 = std::min(f.x0, 0.0);
  f.y0 = std::min(f.y0, 0.0);
  f.y1 = std::max(f.y1, 1.0);
  std::ostringstream svg;
  svg << Header(kWidth, kHeight, title) << f.Render(x_label, y_label);
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    labels.push_back(s.label);
    if (!s.band.empty() && !s.x.empty()) {
      svg << "<polygon fill=\"" << Color(k) << "\" fill-opacity=\"0.2\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        svg << Num(f.X(s.x[i])) << ',' << Num(f.Y(s.y[i] + s.band[i])) << ' ';
      }
      for (std::size_t i = s.x.size(); i-- > 0;) {
        svg << Num(f.X(s.x[i])) << ',' << Num(f.Y(s.y[i] - s.band[i])) << ' ';
      }
      svg << "\"/>\n";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << Color(k)
        << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      svg << Num(f.X(s.x[i])) << ',' << Num(f.Y(s.y[i])) << ' ';
    }
    svg << "\"><title>" << Escape(s.label) << "</title></polyline>\n";
  }
  svg << Legend(labels) << "</svg>\n";
  return svg.str();
}

std::string BoxplotSvg(
    const std::string& title,
    const std::vector<std::pair<std::string, std::vector<double>>>& samples) {
  Frame f{0, static_cast<double>(samples.size()), 0, 1};
  std::ostringstream svg;
  svg << Header(kWidth, kHeight, title);
  // Categorical x axis: draw the frame without numeric x ticks.
  const double bottom = kHeight - kBottom;
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
      << kWidth - kRight - kLeft << "\" height=\"" << bottom - kTop
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double yv = i / 4.0;
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << Num(f.Y(yv) + 4)
        << "\" text-anchor=\"end\">" << TickLabel(yv) << "</text>\n"
        << "<line x1=\"" << kLeft << "\" y1=\"" << Num(f.Y(yv)) << "\" x2=\""
        << kWidth - kRight << "\" y2=\"" << Num(f.Y(yv))
        << "\" stroke=\"#ddd\"/>\n";
  }
  svg << "<text transform=\"translate(18," << (kTop + bottom) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">fraction of runs optimal per "
         "matrix</text>\n";
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const BoxStats b = ComputeBoxStats(samples[k].second);
    const double cx = f.X(k + 0.5);
    const double half = std::min(25.0, (f.X(1) - f.X(0)) * 0.3);
    svg << "<g><title>" << Escape(samples[k].first) << ": median "
        << TickLabel(b.median) << "</title>\n"
        << "<line x1=\"" << Num(cx) << "\" y1=\"" << Num(f.Y(b.min)) << "\" x2=\""
        << Num(cx) << "\" y2=\"" << Num(f.Y(b.max)) << "\" stroke=\"#333\"/>\n"
        << "<rect x=\"" << Num(cx - half) << "\" y=\"" << Num(f.Y(b.q3))
        << "\" width=\"" << Num(2 * half) << "\" height=\""
        << Num(std::max(f.Y(b.q1) - f.Y(b.q3), 1.0)) << "\" fill=\"" << Color(k)
        << "\" fill-opacity=\"0.6\" stroke=\"#333\"/>\n"
        << "<line x1=\"" << Num(cx - half) << "\" y1=\"" << Num(f.Y(b.median))
        << "\" x2=\"" << Num(cx + half) << "\" y2=\"" << Num(f.Y(b.median))
        << "\" stroke=\"black\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << Num(cx) << "\" y=\"" << bottom + 18
        << "\" text-anchor=\"middle\">" << Escape(samples[k].first)
        << "</text></g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string HeatTableSvg(const std::string& title,
                         const std::vector<std::string>& row_labels,
                         const std::vector<std::string>& col_labels,
                         const std::vector<std::vector<double>>& values) {
  const double cell = col_labels.size() > 8 ? 18 : 56;
  const double left = 60;
  const double top = 60;
  const double width = left + cell * col_labels.size() + 20;
  const double height = top + cell * row_labels.size() + 20;
  double peak = 0.0;
  for (const auto& row : values) {
    for (double v : row) peak = std::max(peak, v);
  }
  std::ostringstream svg;
  svg << Header(std::max(width, 240.0), height, title);
  for (std::size_t c = 0; c < col_labels.size(); ++c) {
    svg << "<text x=\"" << Num(left + cell * (c + 0.5)) << "\" y=\"" << top - 8
        << "\" text-anchor=\"middle\" font-size=\"10\">" << Escape(col_labels[c])
        << "</text>\n";
  }
  for (std::size_t r = 0; r < row_labels.size(); ++r) {
    const double y = top + cell * r;
    svg << "<text x=\"" << left - 6 << "\" y=\"" << Num(y + cell / 2 + 4)
        << "\" text-anchor=\"end\" font-size=\"10\">" << Escape(row_labels[r])
        << "</text>\n";
    for (std::size_t c = 0; c < col_labels.size(); ++c) {
      const double v = values[r][c];
      const double shade = peak > 0 ? v / peak : 0.0;
      svg << "<rect x=\"" << Num(left + cell * c) << "\" y=\"" << Num(y)
          << "\" width=\"" << cell << "\" height=\"" << cell
          << "\" fill=\"#08519c\" fill-opacity=\"" << Num(0.05 + 0.95 * shade)
          << "\" stroke=\"white\"><title>" << Escape(row_labels[r]) << ", "
          << Escape(col_labels[c]) << ": " << TickLabel(v) << "</title></rect>\n";
      if (cell >= 40) {
        svg << "<text x=\"" << Num(left + cell * (c + 0.5)) << "\" y=\""
            << Num(y + cell / 2 + 4) << "\" text-anchor=\"middle\" fill=\""
            << (shade > 0.5 ? "white" : "black") << "\">" << TickLabel(v)
            << "</text>\n";
      }
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string TableSvg(const std::string& title, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  const double row_height = 20;
  const double col_width = 170;
  const double width = 20 + col_width * header.size();
  const double height = 50 + row_height * (rows.size() + 1) + 10;
  std::ostringstream svg;
  svg << Header(width, height, title);
  auto emit = [&](const std::vector<std::string>& cells, double y, bool bold) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      svg << "<text x=\"" << 10 + col_width * c << "\" y=\"" << y << "\""
          << (bold ? " font-weight=\"bold\"" : "") << ">" << Escape(cells[c])
          << "</text>\n";
    }
  };
  emit(header, 50, true);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    emit(rows[r], 50 + row_height * (r + 1), false);
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::string> RenderReport(const fs::path& in, const fs::path& out) {
  if (!fs::is_directory(in)) Fail(in, 0, "not a directory");
  const fs::path curves_path = in / "curves.csv";
  if (!fs::exists(curves_path)) Fail(curves_path, 0, "missing curves.csv");
  const CsvTable curves =
      ReadCsv(curves_path, {"algorithm", "matrix_id", "episode", "mean_raw_reward",
                            "mean_norm_reward", "stderr", "pct_optimal"});
  if (curves.rows.empty()) Fail(curves_path, 2, "no data rows");

  // Series keyed by (algorithm, matrix_id) in first-seen order.
  std::vector<std::string> keys;
  std::map<std::string, Series> reward;
  std::map<std::string, Series> pct;
  std::vector<std::string> algorithms;
  std::set<std::string> matrix_ids;
  for (const auto& row : curves.rows) matrix_ids.insert(row[1]);
  for (std::size_t i = 0; i < curves.rows.size(); ++i) {
    const auto& row = curves.rows[i];
    const int line = curves.lines[i];
    const std::string key = matrix_ids.size() > 1 ? row[0] + " [" + row[1] + "]" : row[0];
    if (!reward.count(key)) {
      keys.push_back(key);
      reward[key].label = key;
      pct[key].label = key;
    }
    if (std::find(algorithms.begin(), algorithms.end(), row[0]) == algorithms.end()) {
      algorithms.push_back(row[0]);
    }
    const double episode = CsvNumber(curves_path, line, row[2]);
    CsvNumber(curves_path, line, row[3]);
    const double norm = CsvNumber(curves_path, line, row[4]);
    const double err = CsvNumber(curves_path, line, row[5]);
    const double frac = CsvNumber(curves_path, line, row[6]);
    Series& r = reward[key];
    if (!r.x.empty() && episode <= r.x.back()) {
      Fail(curves_path, line, "episodes must increase within a series");
    }
    r.x.push_back(episode);
    r.y.push_back(norm);
    r.band.push_back(err);
    pct[key].x.push_back(episode);
    pct[key].y.push_back(frac);
  }
  std::vector<Series> reward_series;
  std::vector<Series> pct_series;
  for (const std::string& k : keys) {
    reward_series.push_back(reward[k]);
    pct_series.push_back(pct[k]);
  }

  std::vector<std::string> written;
  Save(out / "reward_curves.svg",
       LineChartSvg("Mean per-state-normalized reward (shaded: standard error)",
                    "episode", "normalized reward", reward_series),
       &written);
  Save(out / "pct_optimal.svg",
       LineChartSvg("Fraction of runs with an optimal greedy policy", "episode",
                    "fraction optimal", pct_series),
       &written);

  std::vector<std::pair<std::string, std::vector<double>>> boxes;
  std::vector<std::vector<std::string>> partition_rows;
  std::vector<std::vector<std::string>> partition_svg_rows;
  for (const std::string& algo : algorithms) {
    const fs::path dir = in / algo;
    const fs::path box_path = dir / "boxplot.csv";
    if (fs::exists(box_path)) {
      const CsvTable box = ReadCsv(box_path, {"matrix_id", "pct_optimal"});
      std::vector<double> values;
      for (std::size_t i = 0; i < box.rows.size(); ++i) {
        values.push_back(CsvNumber(box_path, box.lines[i], box.rows[i][1]));
      }
      if (values.empty()) Fail(box_path, 2, "no data rows");
      boxes.emplace_back(algo, std::move(values));
    }
    const fs::path counts_path = dir / "counts.csv";
    if (fs::exists(counts_path)) {
      const CsvTable counts = ReadCsv(counts_path, {"state", "action", "count"});
      std::vector<std::string> states;
      std::vector<std::string> actions;
      std::map<std::pair<std::string, std::string>, double> cells;
      for (std::size_t i = 0; i < counts.rows.size(); ++i) {
        const auto& row = counts.rows[i];
        if (std::find(states.begin(), states.end(), row[0]) == states.end()) {
          states.push_back(row[0]);
        }
        if (std::find(actions.begin(), actions.end(), row[1]) == actions.end()) {
          actions.push_back(row[1]);
        }
        cells[{row[0], row[1]}] = CsvNumber(counts_path, counts.lines[i], row[2]);
      }
      std::vector<std::vector<double>> grid(states.size(),
                                            std::vector<double>(actions.size(), 0.0));
      for (std::size_t s = 0; s < states.size(); ++s) {
        for (std::size_t a = 0; a < actions.size(); ++a) {
          const auto it = cells.find({states[s], actions[a]});
          if (it != cells.end()) grid[s][a] = it->second;
        }
      }
      Save(out / ("counts_" + algo + ".svg"),
           HeatTableSvg("Final greedy (state, action) counts: " + algo, states,
                        actions, grid),
           &written);
    }
    const fs::path part_path = dir / "partitions.csv";
    if (fs::exists(part_path)) {
      const CsvTable parts = ReadCsv(part_path, {"signature", "count"});
      double total = 0.0;
      std::vector<std::pair<std::string, double>> entries;
      for (std::size_t i = 0; i < parts.rows.size(); ++i) {
        const double c = CsvNumber(part_path, parts.lines[i], parts.rows[i][1]);
        total += c;
        entries.emplace_back(parts.rows[i][0], c);
      }
      std::stable_sort(entries.begin(), entries.end(),
                       [](const auto& a, const auto& b) { return a.second > b.second; });
      for (std::size_t i = 0; i < entries.size(); ++i) {
        char share[32];
        std::snprintf(share, sizeof(share), "%.4f",
                      total > 0 ? entries[i].second / total : 0.0);
        partition_rows.push_back(
            {algo, entries[i].first, TickLabel(entries[i].second), share});
        if (i < kMaxPartitionRows) partition_svg_rows.push_back(partition_rows.back());
      }
    }
  }
  if (!boxes.empty()) {
    Save(out / "boxplot.svg",
         BoxplotSvg("Per-matrix fraction of runs optimal", boxes), &written);
  }
  if (!partition_rows.empty()) {
    const std::vector<std::string> header = {"algorithm", "signature", "count", "share"};
    Save(out / "partitions.svg",
         TableSvg("Message partitions of the final greedy sender", header,
                  partition_svg_rows),
         &written);
    std::string csv = "algorithm,signature,count,share\n";
    for (const auto& row : partition_rows) {
      csv += row[0] + ",\"" + row[1] + "\"," + row[2] + ',' + row[3] + '\n';
    }
    Save(out / "partitions_table.csv", csv, &written);
  }
  return written;
}

}  // namespace sigbench
