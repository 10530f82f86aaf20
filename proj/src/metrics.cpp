// Copyright 2026 The FAN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fan/metrics.h"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <optional>
#include <vector>

#include "fan/csv.h"

namespace fan {

namespace {

std::string Cell(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : std::string();
}

std::optional<double> ParseCell(const std::string& cell, std::size_t line,
                                const char* column, bool optional) {
  if (cell.empty()) {
    if (optional) return std::nullopt;
    throw DataError("trace line " + std::to_string(line) + ": empty " + column);
  }
  double v = 0.0;
  if (!ParseDouble(cell, v)) {
    throw DataError("trace line " + std::to_string(line) + ": bad " + column +
                    " '" + cell + "'");
  }
  return v;
}

}  // namespace

std::string FormatTrace(const TrainingTrace& trace) {
  if (trace.epochs.empty()) throw InputError("cannot export an empty trace");
  Table table;
  table.header = {"epoch", "mse", "d_current", "d_hat",
                  "l_a",   "ratchet_best", "d_bar", "baseline"};
  std::size_t previous = 0;
  for (const EpochRecord& r : trace.epochs) {
    if (r.epoch <= previous) {
      throw InputError("trace epochs must be strictly increasing");
    }
    previous = r.epoch;
    table.rows.push_back({std::to_string(r.epoch), FormatDouble(r.mse),
                          FormatDouble(r.d_current), FormatDouble(r.d_hat),
                          FormatDouble(r.l_a), Cell(r.ratchet_best),
                          Cell(r.d_bar), Cell(trace.baseline)});
  }
  return FormatCsv(table);
}

TrainingTrace ParseTrace(std::string_view text) {
  const Table table = ParseCsv(text);
  std::string header;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i > 0) header += ",";
    header += table.header[i];
  }
  if (header != kTraceHeader) throw DataError("unexpected trace header");
  TrainingTrace trace;
  std::size_t line = 1;
  for (const auto& row : table.rows) {
    ++line;
    EpochRecord r;
    const double epoch = *ParseCell(row[0], line, "epoch", false);
    if (epoch < 1 || epoch != static_cast<double>(static_cast<std::size_t>(epoch))) {
      throw DataError("trace line " + std::to_string(line) + ": bad epoch");
    }
    r.epoch = static_cast<std::size_t>(epoch);
    r.mse = *ParseCell(row[1], line, "mse", false);
    r.d_current = *ParseCell(row[2], line, "d_current", false);
    r.d_hat = *ParseCell(row[3], line, "d_hat", false);
    r.l_a = *ParseCell(row[4], line, "l_a", false);
    r.ratchet_best = ParseCell(row[5], line, "ratchet_best", true);
    r.d_bar = ParseCell(row[6], line, "d_bar", true);
    if (auto b = ParseCell(row[7], line, "baseline", true)) trace.baseline = b;
    if (!trace.epochs.empty() && r.epoch <= trace.epochs.back().epoch) {
      throw DataError("trace epochs must be strictly increasing");
    }
    trace.epochs.push_back(r);
  }
  return trace;
}

void ExportTrace(const TrainingTrace& trace, const std::string& path) {
  WriteFile(path, FormatTrace(trace));
}

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 210.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;

struct Series {
  std::string name;
  std::string color;
  bool dashed = false;
  bool markers = false;
  std::vector<std::pair<double, double>> points;  // (epoch, value in [0,1])
};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Min-max scaling; a constant series sits at the middle of the axis.
std::vector<std::pair<double, double>> Scaled(
    const TrainingTrace& trace, const std::function<double(const EpochRecord&)>& get) {
  double lo = get(trace.epochs.front());
  double hi = lo;
  for (const auto& r : trace.epochs) {
    lo = std::min(lo, get(r));
    hi = std::max(hi, get(r));
  }
  std::vector<std::pair<double, double>> out;
  for (const auto& r : trace.epochs) {
    const double v = hi > lo ? (get(r) - lo) / (hi - lo) : 0.5;
    out.emplace_back(static_cast<double>(r.epoch), v);
  }
  return out;
}

}  // namespace

std::string FormatConvergenceChart(const TrainingTrace& trace) {
  if (trace.epochs.empty()) throw InputError("cannot chart an empty trace");
  const double first = static_cast<double>(trace.epochs.front().epoch);
  const double last = static_cast<double>(trace.epochs.back().epoch);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double epoch) {
    return last > first ? kLeft + (epoch - first) / (last - first) * plot_w
                        : kLeft + plot_w / 2;
  };
  auto py = [&](double v) {
    return kTop + (1.0 - std::clamp(v, 0.0, 1.0)) * plot_h;
  };

  std::vector<Series> series;
  Series dbar{"D_bar (proportion correct)", "#d62728", false, true, {}};
  for (const auto& r : trace.epochs) {
    if (r.d_bar) dbar.points.emplace_back(static_cast<double>(r.epoch), *r.d_bar);
  }
  if (!dbar.points.empty()) series.push_back(dbar);
  if (trace.baseline) {
    series.push_back({"majority baseline", "#000000", true, false,
                      {{first, *trace.baseline}, {last, *trace.baseline}}});
  }
  series.push_back({"MSE (scaled)", "#1f77b4", false, false,
                    Scaled(trace, [](const EpochRecord& r) { return r.mse; })});
  series.push_back(
      {"D (scaled)", "#ff7f0e", false, false,
       Scaled(trace, [](const EpochRecord& r) { return r.d_current; })});
  series.push_back({"D_hat (scaled)", "#2ca02c", false, false,
                    Scaled(trace, [](const EpochRecord& r) { return r.d_hat; })});
  series.push_back({"L_A (scaled)", "#9467bd", false, false,
                    Scaled(trace, [](const EpochRecord& r) { return r.l_a; })});

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         Num(kWidth) + "\" height=\"" + Num(kHeight) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + Num(kWidth) + "\" height=\"" +
         Num(kHeight) + "\" fill=\"#ffffff\"/>\n";
  svg += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  // Axes and ticks.
  svg += "<line x1=\"" + Num(kLeft) + "\" y1=\"" + Num(kTop) + "\" x2=\"" +
         Num(kLeft) + "\" y2=\"" + Num(kTop + plot_h) +
         "\" stroke=\"#444444\"/>\n";
  svg += "<line x1=\"" + Num(kLeft) + "\" y1=\"" + Num(kTop + plot_h) +
         "\" x2=\"" + Num(kLeft + plot_w) + "\" y2=\"" + Num(kTop + plot_h) +
         "\" stroke=\"#444444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = i / 4.0;
    svg += "<text x=\"" + Num(kLeft - 6) + "\" y=\"" + Num(py(v) + 4) +
           "\" text-anchor=\"end\">" + Num(v) + "</text>\n";
  }
  svg += "<text x=\"" + Num(kLeft) + "\" y=\"" + Num(kTop + plot_h + 18) +
         "\" text-anchor=\"middle\">" + std::to_string(trace.epochs.front().epoch) +
         "</text>\n";
  svg += "<text x=\"" + Num(kLeft + plot_w) + "\" y=\"" +
         Num(kTop + plot_h + 18) + "\" text-anchor=\"middle\">" +
         std::to_string(trace.epochs.back().epoch) + "</text>\n";
  svg += "<text x=\"" + Num(kLeft + plot_w / 2) + "\" y=\"" +
         Num(kHeight - 12) + "\" text-anchor=\"middle\">epoch</text>\n";
  svg += "<text x=\"14\" y=\"" + Num(kTop + plot_h / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
         Num(kTop + plot_h / 2) + ")\">proportion / scaled</text>\n";

  double legend_y = kTop + 10;
  for (const Series& s : series) {
    svg += "<polyline fill=\"none\" stroke=\"" + s.color +
           "\" stroke-width=\"1.5\"";
    if (s.dashed) svg += " stroke-dasharray=\"6 4\"";
    svg += " points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      if (i > 0) svg += " ";
      svg += Num(px(s.points[i].first)) + "," + Num(py(s.points[i].second));
    }
    svg += "\"/>\n";
    if (s.markers) {
      for (const auto& [e, v] : s.points) {
        svg += "<circle cx=\"" + Num(px(e)) + "\" cy=\"" + Num(py(v)) +
               "\" r=\"3\" fill=\"" + s.color + "\"/>\n";
      }
    }
    const double lx = kWidth - kRight + 15;
    svg += "<line x1=\"" + Num(lx) + "\" y1=\"" + Num(legend_y) + "\" x2=\"" +
           Num(lx + 25) + "\" y2=\"" + Num(legend_y) + "\" stroke=\"" +
           s.color + "\" stroke-width=\"1.5\"" +
           (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
    svg += "<text x=\"" + Num(lx + 32) + "\" y=\"" + Num(legend_y + 4) +
           "\">" + s.name + "</text>\n";
    legend_y += 18;
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

void RenderConvergenceChart(const TrainingTrace& trace,
                            const std::string& path) {
  WriteFile(path, FormatConvergenceChart(trace));
}

}  // namespace fan
