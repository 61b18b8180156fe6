/*
 * Copyright 2026 The fald Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fald/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "fald/csv.hpp"
#include "fald/error.hpp"

namespace fald {

std::string CurvesCsv(std::span<const CurveRow> rows) {
  std::string out = "sweep_value,round,metric,value\n";
  for (const CurveRow& r : rows) {
    out += fmt::format("{},{},{},{}\n", r.sweep_value, r.round, r.metric, FormatDouble(r.value));
  }
  return out;
}

std::vector<double> TrailingMean(std::span<const double> values, std::size_t window) {
  if (window == 0) Fail(ErrorCode::kInvalidArgument, "window must be >= 1");
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t lo = i + 1 >= window ? i + 1 - window : 0;
    double s = 0.0;
    for (std::size_t j = lo; j <= i; ++j) s += values[j];
    out[i] = s / static_cast<double>(i + 1 - lo);
  }
  return out;
}

std::optional<std::size_t> FirstCrossing(std::span<const double> values, double eps,
                                         std::size_t window) {
  const auto smooth = TrailingMean(values, window);
  for (std::size_t i = 0; i < smooth.size(); ++i)
    if (smooth[i] <= eps) return i;
  return std::nullopt;
}

double PlateauMean(std::span<const double> values) {
  if (values.empty()) Fail(ErrorCode::kInvalidArgument, "empty curve");
  const std::size_t lo = values.size() / 2;
  double s = 0.0;
  for (std::size_t i = lo; i < values.size(); ++i) s += values[i];
  return s / static_cast<double>(values.size() - lo);
}

namespace {

struct Series {
  std::string name;
  std::vector<double> x, y;
};

std::string Escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string RenderSvgFromCsv(std::string_view csv, std::string_view metric,
                             std::string_view title, bool log_y) {
  std::istringstream in{std::string(csv)};
  const CsvTable table = ReadCsv(in);
  if (table.header != std::vector<std::string>{"sweep_value", "round", "metric", "value"}) {
    Fail(ErrorCode::kInvalidArgument, "not a curves table");
  }
  std::vector<Series> series;
  for (const auto& row : table.rows) {
    if (row[2] != metric) continue;
    const double y = ParseDouble(row[3]);
    if (!std::isfinite(y)) continue;
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const Series& s) { return s.name == row[0]; });
    if (it == series.end()) {
      series.push_back({row[0], {}, {}});
      it = series.end() - 1;
    }
    it->x.push_back(ParseDouble(row[1]));
    it->y.push_back(y);
  }
  bool use_log = log_y;
  double x_lo = 0.0, x_hi = 1.0, y_lo = INFINITY, y_hi = -INFINITY;
  for (const Series& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
    }
  }
  if (!(y_lo <= y_hi)) {
    y_lo = 0.0;
    y_hi = 1.0;
  }
  if (y_lo <= 0.0) use_log = false;
  auto ty = [&](double v) { return use_log ? std::log10(v) : v; };
  double a = ty(y_lo), b = ty(y_hi);
  if (b - a < 1e-12) {
    a -= 0.5;
    b += 0.5;
  }

  constexpr double kW = 720, kH = 440, kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double y) { return kTop + (b - ty(y)) / (b - a) * ph; };
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                            "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"22\" font-size=\"14\">{3}</text>\n"
      "<rect x=\"{4}\" y=\"{5}\" width=\"{6}\" height=\"{7}\" fill=\"none\" stroke=\"black\"/>\n",
      kW, kH, kLeft, Escape(title), kLeft, kTop, pw, ph);
  for (int t = 0; t <= 4; ++t) {
    const double f = t / 4.0;
    const double xv = x_lo + f * (x_hi - x_lo);
    const double yt = a + f * (b - a);
    const double yv = use_log ? std::pow(10.0, yt) : yt;
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:g}</text>\n"
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.3g}</text>\n",
        px(xv), kTop + ph + 18, std::round(xv), kLeft - 6, kTop + (1.0 - f) * ph + 4, yv);
  }
  svg += fmt::format(
      "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">communication round</text>\n"
      "<text x=\"16\" y=\"{:.1f}\" transform=\"rotate(-90 16 {:.1f})\" "
      "text-anchor=\"middle\">{}{}</text>\n",
      kLeft + pw / 2, kH - 10, kTop + ph / 2, kTop + ph / 2, Escape(metric),
      use_log ? " (log scale)" : "");
  for (std::size_t i = 0; i < series.size(); ++i) {
    const Series& s = series[i];
    const char* color = kColors[i % std::size(kColors)];
    std::string pts;
    for (std::size_t j = 0; j < s.x.size(); ++j) {
      pts += fmt::format("{}{:.2f},{:.2f}", j == 0 ? "" : " ", px(s.x[j]), py(s.y[j]));
    }
    svg += fmt::format(
        "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color, pts);
    const double ly = kTop + 14 + 18 * static_cast<double>(i);
    svg += fmt::format(
        "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"{3}\" "
        "stroke-width=\"2\"/>\n<text x=\"{4:.1f}\" y=\"{5:.1f}\">{6}</text>\n",
        kLeft + pw + 12, ly, kLeft + pw + 32, color, kLeft + pw + 38, ly + 4, Escape(s.name));
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace fald
