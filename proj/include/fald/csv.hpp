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

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace fald {

// Shortest decimal text that parses back to exactly the same double.
// Non-finite values print as "inf", "-inf" or "nan".
std::string FormatDouble(double v);

// Strict full-string parse; throws kInvalidArgument on trailing garbage.
double ParseDouble(std::string_view text);
long long ParseInteger(std::string_view text);

std::vector<std::string> SplitFields(std::string_view line, char sep = ',');
std::string_view Trim(std::string_view s);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Header row is mandatory. Blank lines are skipped; a row with a different
// field count than the header is an error naming its line.
CsvTable ReadCsv(std::istream& in);

}  // namespace fald
