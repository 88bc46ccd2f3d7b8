// Copyright 2026 The Parley Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PARLEY_CSV_HPP
#define PARLEY_CSV_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace parley::csv {

/// Shortest round-trip decimal form of a double ("0.41" stays "0.41").
std::string format_double(double value);

/// Quotes a field only when it contains a separator, quote, or newline.
std::string escape(std::string_view field);

std::string join_row(const std::vector<std::string>& fields);

/// Splits one CSV line, honoring double-quote escaping.
std::vector<std::string> split_row(std::string_view line);

/// Reads a whole CSV file into rows of fields. Skips blank lines.
std::vector<std::vector<std::string>> read_file(const std::filesystem::path& path);

/// Writes lines joined by '\n' with a trailing newline; throws IoError.
void write_file(const std::filesystem::path& path, const std::vector<std::string>& lines);

double parse_double(const std::string& field);
std::int64_t parse_int(const std::string& field);

}  // namespace parley::csv

#endif  // PARLEY_CSV_HPP
