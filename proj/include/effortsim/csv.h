/*
 * Copyright 2026 The effortsim Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef EFFORTSIM_CSV_H_
#define EFFORTSIM_CSV_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace effortsim::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column, or -1.
  int column(std::string_view name) const;
};

// Parses delimited text with optional double-quoted fields ("" escapes a
// quote). Every row must have as many fields as the header. Throws DataError.
Table parse(std::string_view text, char delimiter = ',');
Table read_file(const std::filesystem::path& path, char delimiter = ',');

// Quotes a field only when it contains the delimiter, a quote or a newline.
std::string escape(std::string_view field, char delimiter = ',');
void write_row(std::ostream& out, const std::vector<std::string>& fields,
               char delimiter = ',');

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);
// Strict full-string parse; throws DataError naming `what` on failure.
double parse_double(std::string_view text, std::string_view what);

}  // namespace effortsim::csv

#endif  // EFFORTSIM_CSV_H_
