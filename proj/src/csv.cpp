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

#include "fald/csv.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "fald/error.hpp"

namespace fald {

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double ParseDouble(std::string_view text) {
  const std::string_view t = Trim(text);
  if (t == "inf" || t == "+inf" || t == "infinity") return HUGE_VAL;
  if (t == "-inf" || t == "-infinity") return -HUGE_VAL;
  double v = 0.0;
  const char* begin = t.data();
  if (!t.empty() && t.front() == '+') ++begin;
  const auto res = std::from_chars(begin, t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    Fail(ErrorCode::kInvalidArgument, fmt::format("'{}' is not a number", text));
  }
  return v;
}

long long ParseInteger(std::string_view text) {
  const std::string_view t = Trim(text);
  long long v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    Fail(ErrorCode::kInvalidArgument, fmt::format("'{}' is not an integer", text));
  }
  return v;
}

std::vector<std::string> SplitFields(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(Trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

CsvTable ReadCsv(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto fields = SplitFields(line);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      Fail(ErrorCode::kInvalidArgument,
           fmt::format("csv line {}: {} fields, header has {}", line_no,
                       fields.size(), table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (!have_header) Fail(ErrorCode::kInvalidArgument, "csv input has no header row");
  return table;
}

}  // namespace fald
