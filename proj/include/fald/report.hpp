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

#pragma once

// Curve tables, curve statistics and SVG rendering.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fald {

// One row of the long-format curve table.
struct CurveRow {
  std::string sweep_value;
  std::size_t round = 0;
  std::string metric;
  double value = 0.0;
};

// Header sweep_value,round,metric,value.
std::string CurvesCsv(std::span<const CurveRow> rows);

// Mean of the last `window` points ending at each index (fewer at the start).
std::vector<double> TrailingMean(std::span<const double> values, std::size_t window);

// First index whose trailing mean (window 5) is <= eps.
std::optional<std::size_t> FirstCrossing(std::span<const double> values, double eps,
                                         std::size_t window = 5);

// Mean over the second half of the curve (indices >= size / 2).
double PlateauMean(std::span<const double> values);

// Renders every series of `metric` found in a curves CSV text as a polyline,
// x = round, y = value (log10 scale when log_y and all values are positive).
std::string RenderSvgFromCsv(std::string_view csv, std::string_view metric,
                             std::string_view title, bool log_y);

}  // namespace fald
