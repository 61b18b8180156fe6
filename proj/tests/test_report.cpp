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

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "fald/error.hpp"
#include "fald/report.hpp"

using namespace fald;

TEST_SUITE("report") {
  TEST_CASE("curves csv layout") {
    const std::vector<CurveRow> rows{{"1e-4", 0, "w2", 1.5}, {"1e-4", 1, "w2", 0.25}};
    CHECK(CurvesCsv(rows) == "sweep_value,round,metric,value\n1e-4,0,w2,1.5\n1e-4,1,w2,0.25\n");
  }

  TEST_CASE("trailing mean") {
    const std::vector<double> v{1, 2, 3, 4, 5, 6};
    const auto m = TrailingMean(v, 3);
    REQUIRE(m.size() == 6);
    CHECK(m[0] == 1.0);
    CHECK(m[1] == 1.5);
    CHECK(m[2] == 2.0);
    CHECK(m[5] == 5.0);
  }

  TEST_CASE("first crossing uses the smoothed curve") {
    // A single low point does not count as a crossing.
    const std::vector<double> v{10, 10, 10, 0.0, 10, 10, 1, 1, 1, 1, 1, 1};
    const auto hit = FirstCrossing(v, 1.0);
    REQUIRE(hit.has_value());
    CHECK(*hit == 10);
    CHECK_FALSE(FirstCrossing(v, 0.5).has_value());
  }

  TEST_CASE("plateau is the mean of the second half") {
    const std::vector<double> v{9, 9, 1, 3};
    CHECK(PlateauMean(v) == 2.0);
    const std::vector<double> odd{100, 2, 4};
    CHECK(PlateauMean(odd) == 3.0);
  }

  TEST_CASE("svg renders only data present in the csv") {
    const std::vector<CurveRow> rows{{"a", 0, "w2", 1.0},  {"a", 1, "w2", 0.1},
                                     {"b", 0, "w2", 2.0},  {"b", 1, "w2", 0.2},
                                     {"a", 0, "other", 9.0}};
    const std::string svg = RenderSvgFromCsv(CurvesCsv(rows), "w2", "test", true);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    std::size_t lines = 0;
    for (auto p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1))
      ++lines;
    CHECK(lines == 2);
    CHECK(svg.find(">a<") != std::string::npos);
    CHECK(svg.find(">b<") != std::string::npos);
    const std::string none = RenderSvgFromCsv(CurvesCsv(rows), "missing", "t", false);
    CHECK(none.find("<polyline") == std::string::npos);
    CHECK_THROWS_AS(RenderSvgFromCsv("not,a,curve\n", "w2", "t", true), Error);
  }
}
