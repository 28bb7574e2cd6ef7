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

#ifndef NMFCLUST_PREPROCESS_HPP_
#define NMFCLUST_PREPROCESS_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nmfclust/date.hpp"
#include "nmfclust/matrix.hpp"

namespace nmfclust {

// Daily new counts, rows = entities, columns = consecutive calendar days.
struct RawCounts {
  std::vector<std::string> entities;
  std::vector<Date> dates;
  Matrix counts;

  Index rows() const { return counts.rows(); }
  Index cols() const { return counts.cols(); }
};

struct PopulationTable {
  std::map<std::string, std::int64_t> population;
};

// Per-million, smoothed series consumed by the factorization pipeline.
struct SeriesMatrix {
  std::vector<std::string> entities;
  std::vector<Date> dates;
  Matrix values;

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }

  // Column index of `date`; throws Error(kInvalidArgument) if out of range.
  Index column_of(const Date& date) const;
  // Inclusive date range [first, last] as a new matrix.
  SeriesMatrix slice(const Date& first, const Date& last) const;
};

struct CleanupResult {
  RawCounts counts;
  std::size_t replaced = 0;
};

// Clamps negative reporting corrections to zero.
CleanupResult negative_cleanup(const RawCounts& raw);

// counts[i][j] * 1e6 / population(entity i). Throws Error(kValidation) naming
// the entity when it has no population entry or a nonpositive one.
RawCounts scale_per_million(const RawCounts& raw, const PopulationTable& pop);

// Centered 7-day mean; near the ends the window is truncated to valid days.
Matrix moving_average_7(const Matrix& values);
SeriesMatrix moving_average_7(const RawCounts& raw);

struct PreprocessReport {
  std::size_t negatives_clamped = 0;
};

// negative_cleanup -> scale_per_million -> moving_average_7.
SeriesMatrix preprocess(const RawCounts& raw, const PopulationTable& pop,
                        PreprocessReport* report = nullptr);

// ---------------------------------------------------------------------------
// Ingestion

enum class CountsFormat { kWide, kLong };

struct IngestOptions {
  CountsFormat format = CountsFormat::kWide;
  // Insert zero columns for calendar days absent from the input instead of
  // failing.
  bool fill_gaps_zero = false;
};

struct EntityIngestStats {
  std::string entity;
  std::size_t missing_days = 0;
  std::size_t negative_cells = 0;
};

struct IngestReport {
  std::vector<EntityIngestStats> per_entity;
  std::vector<Date> gap_days;  // calendar days with no data for any entity
  std::size_t missing_cells = 0;
  std::size_t negative_cells = 0;
};

// Wide: header "entity,YYYY-MM-DD,..."; long: "entity,date,count". Empty or
// unreported cells become 0 and are counted in the report. Calendar gaps
// throw Error(kValidation) unless options.fill_gaps_zero.
RawCounts read_counts(const std::string& path, const IngestOptions& options,
                      IngestReport* report = nullptr);
PopulationTable read_population(const std::string& path);

}  // namespace nmfclust

#endif  // NMFCLUST_PREPROCESS_HPP_
