// Copyright 2026 The nmfclust Authors. All Rights Reserved.
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

#ifndef NMFCLUST_CSV_HPP_
#define NMFCLUST_CSV_HPP_

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nmfclust::csv {

using Row = std::vector<std::string>;

// Reads comma-separated records. Double-quoted fields may contain commas and
// "" escapes; surrounding whitespace of unquoted fields is trimmed. Blank
// lines are skipped. A UTF-8 BOM on the first line is ignored.
std::vector<Row> read(std::istream& in);
std::vector<Row> read_file(const std::string& path);

// Locale-independent number parsing. Returns nullopt for malformed text.
std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int(std::string_view text);

// Shortest decimal text that round-trips to the identical double.
std::string format_double(double value);

// Quotes a field when it contains a delimiter, quote or newline.
std::string escape(std::string_view field);

}  // namespace nmfclust::csv

#endif  // NMFCLUST_CSV_HPP_
