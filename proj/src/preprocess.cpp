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

#include "nmfclust/preprocess.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "nmfclust/csv.hpp"
#include "nmfclust/error.hpp"

namespace nmfclust {

namespace {

constexpr Index kHalfWindow = 3;

void check_shape(const RawCounts& raw) {
  if (raw.counts.rows() != static_cast<Index>(raw.entities.size()) ||
      raw.counts.cols() != static_cast<Index>(raw.dates.size())) {
    throw_error(ErrorCode::kShapeMismatch,
                "count matrix is " + std::to_string(raw.counts.rows()) + "x" +
                    std::to_string(raw.counts.cols()) + " but has " +
                    std::to_string(raw.entities.size()) + " entities and " +
                    std::to_string(raw.dates.size()) + " dates");
  }
}

}  // namespace

Index SeriesMatrix::column_of(const Date& date) const {
  if (dates.empty() || date < dates.front() || date > dates.back()) {
    throw_error(ErrorCode::kInvalidArgument,
                "date " + date.iso() + " is outside the series calendar" +
                    (dates.empty() ? std::string()
                                   : " [" + dates.front().iso() + ", " + dates.back().iso() + "]"));
  }
  return date - dates.front();
}

SeriesMatrix SeriesMatrix::slice(const Date& first, const Date& last) const {
  if (last < first) {
    throw_error(ErrorCode::kInvalidArgument,
                "window end " + last.iso() + " precedes start " + first.iso());
  }
  const Index a = column_of(first);
  const Index b = column_of(last);
  SeriesMatrix out;
  out.entities = entities;
  out.dates.assign(dates.begin() + a, dates.begin() + b + 1);
  out.values = values.middleCols(a, b - a + 1);
  return out;
}

CleanupResult negative_cleanup(const RawCounts& raw) {
  CleanupResult result{raw, 0};
  for (Index j = 0; j < result.counts.counts.cols(); ++j) {
    for (Index i = 0; i < result.counts.counts.rows(); ++i) {
      double& x = result.counts.counts(i, j);
      if (x < 0.0) {
        x = 0.0;
        ++result.replaced;
      }
    }
  }
  return result;
}

RawCounts scale_per_million(const RawCounts& raw, const PopulationTable& pop) {
  check_shape(raw);
  RawCounts out = raw;
  for (Index i = 0; i < raw.rows(); ++i) {
    const std::string& entity = raw.entities[static_cast<std::size_t>(i)];
    const auto it = pop.population.find(entity);
    if (it == pop.population.end()) {
      throw_error(ErrorCode::kValidation,
                  "entity '" + entity + "' is missing from the population table");
    }
    if (it->second <= 0) {
      throw_error(ErrorCode::kValidation, "entity '" + entity + "' has nonpositive population " +
                                              std::to_string(it->second));
    }
    out.counts.row(i) = raw.counts.row(i) * 1.0e6 / static_cast<double>(it->second);
  }
  return out;
}

Matrix moving_average_7(const Matrix& values) {
  const Index m = values.cols();
  Matrix out(values.rows(), m);
  for (Index j = 0; j < m; ++j) {
    const Index lo = std::max<Index>(0, j - kHalfWindow);
    const Index hi = std::min<Index>(m - 1, j + kHalfWindow);
    out.col(j) = values.middleCols(lo, hi - lo + 1).rowwise().sum() /
                 static_cast<double>(hi - lo + 1);
  }
  return out;
}

SeriesMatrix moving_average_7(const RawCounts& raw) {
  check_shape(raw);
  return SeriesMatrix{raw.entities, raw.dates, moving_average_7(raw.counts)};
}

SeriesMatrix preprocess(const RawCounts& raw, const PopulationTable& pop,
                        PreprocessReport* report) {
  CleanupResult cleaned = negative_cleanup(raw);
  if (report != nullptr) report->negatives_clamped = cleaned.replaced;
  return moving_average_7(scale_per_million(cleaned.counts, pop));
}

// ---------------------------------------------------------------------------
// Ingestion

namespace {

struct Cell {
  double value = 0.0;
  bool present = false;
};

double parse_count(const std::string& text, const std::string& where) {
  const auto v = csv::parse_double(text);
  if (!v) throw_error(ErrorCode::kParse, "invalid count '" + text + "' at " + where);
  return *v;
}

// Lays sparse (entity, date) observations onto a dense calendar.
RawCounts densify(const std::vector<std::string>& entities, const std::set<Date>& seen_dates,
                  const std::vector<std::vector<std::pair<Date, Cell>>>& observations,
                  const IngestOptions& options, IngestReport* report) {
  if (entities.size() < 2) {
    throw_error(ErrorCode::kValidation, "counts input needs at least 2 entities, found " +
                                            std::to_string(entities.size()));
  }
  if (seen_dates.size() < 2) {
    throw_error(ErrorCode::kValidation, "counts input needs at least 2 dates, found " +
                                            std::to_string(seen_dates.size()));
  }
  const Date first = *seen_dates.begin();
  const Date last = *seen_dates.rbegin();
  const int days = (last - first) + 1;

  IngestReport local;
  for (int d = 0; d < days; ++d) {
    if (!seen_dates.contains(first + d)) local.gap_days.push_back(first + d);
  }
  if (!local.gap_days.empty() && !options.fill_gaps_zero) {
    throw_error(ErrorCode::kValidation,
                "calendar gap: " + std::to_string(local.gap_days.size()) +
                    " day(s) missing, first " + local.gap_days.front().iso() +
                    " (use --fill-gaps-zero to treat them as zero counts)");
  }

  RawCounts raw;
  raw.entities = entities;
  raw.dates.reserve(static_cast<std::size_t>(days));
  for (int d = 0; d < days; ++d) raw.dates.push_back(first + d);
  raw.counts = Matrix::Zero(static_cast<Index>(entities.size()), days);

  for (std::size_t i = 0; i < entities.size(); ++i) {
    EntityIngestStats stats{entities[i], 0, 0};
    std::vector<bool> filled(static_cast<std::size_t>(days), false);
    for (const auto& [date, cell] : observations[i]) {
      if (!cell.present) continue;
      const int j = date - first;
      raw.counts(static_cast<Index>(i), j) = cell.value;
      filled[static_cast<std::size_t>(j)] = true;
      if (cell.value < 0.0) ++stats.negative_cells;
    }
    stats.missing_days = static_cast<std::size_t>(std::count(filled.begin(), filled.end(), false));
    local.missing_cells += stats.missing_days;
    local.negative_cells += stats.negative_cells;
    local.per_entity.push_back(std::move(stats));
  }
  if (report != nullptr) *report = std::move(local);
  return raw;
}

RawCounts read_wide(const std::vector<csv::Row>& rows, const std::string& path,
                    const IngestOptions& options, IngestReport* report) {
  if (rows.empty()) throw_error(ErrorCode::kParse, "'" + path + "' is empty");
  const csv::Row& header = rows.front();
  if (header.size() < 2) {
    throw_error(ErrorCode::kParse, "'" + path + "' header needs an entity column and dates");
  }
  std::vector<Date> column_dates;
  std::set<Date> seen;
  for (std::size_t c = 1; c < header.size(); ++c) {
    const Date d = Date::parse(header[c]);
    if (!seen.insert(d).second) {
      throw_error(ErrorCode::kParse, "duplicate date column " + d.iso() + " in '" + path + "'");
    }
    if (!column_dates.empty() && d < column_dates.back()) {
      throw_error(ErrorCode::kParse, "date columns in '" + path + "' are not increasing at " +
                                         d.iso());
    }
    column_dates.push_back(d);
  }

  std::vector<std::string> entities;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<std::pair<Date, Cell>>> observations;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    const std::string where = "'" + path + "' line " + std::to_string(r + 1);
    if (row.size() != header.size()) {
      throw_error(ErrorCode::kParse, where + " has " + std::to_string(row.size()) +
                                         " fields, expected " + std::to_string(header.size()));
    }
    if (row[0].empty()) throw_error(ErrorCode::kParse, where + " has an empty entity name");
    if (!index.emplace(row[0], entities.size()).second) {
      throw_error(ErrorCode::kParse, where + " repeats entity '" + row[0] + "'");
    }
    entities.push_back(row[0]);
    auto& obs = observations.emplace_back();
    for (std::size_t c = 1; c < row.size(); ++c) {
      Cell cell;
      if (!row[c].empty()) cell = Cell{parse_count(row[c], where), true};
      obs.emplace_back(column_dates[c - 1], cell);
    }
  }
  return densify(entities, seen, observations, options, report);
}

RawCounts read_long(const std::vector<csv::Row>& rows, const std::string& path,
                    const IngestOptions& options, IngestReport* report) {
  if (rows.empty()) throw_error(ErrorCode::kParse, "'" + path + "' is empty");
  const csv::Row& header = rows.front();
  if (header.size() != 3 || header[0] != "entity" || header[1] != "date" || header[2] != "count") {
    throw_error(ErrorCode::kParse, "'" + path + "' long-format header must be entity,date,count");
  }
  std::vector<std::string> entities;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<std::pair<Date, Cell>>> observations;
  std::vector<std::set<Date>> seen_per_entity;
  std::set<Date> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    const std::string where = "'" + path + "' line " + std::to_string(r + 1);
    if (row.size() != 3) {
      throw_error(ErrorCode::kParse, where + " has " + std::to_string(row.size()) +
                                         " fields, expected 3");
    }
    const auto [it, inserted] = index.emplace(row[0], entities.size());
    if (inserted) {
      entities.push_back(row[0]);
      observations.emplace_back();
      seen_per_entity.emplace_back();
    }
    const Date d = Date::parse(row[1]);
    if (!seen_per_entity[it->second].insert(d).second) {
      throw_error(ErrorCode::kParse, where + " repeats (" + row[0] + ", " + d.iso() + ")");
    }
    seen.insert(d);
    if (!row[2].empty()) observations[it->second].emplace_back(d, Cell{parse_count(row[2], where), true});
  }
  return densify(entities, seen, observations, options, report);
}

}  // namespace

RawCounts read_counts(const std::string& path, const IngestOptions& options,
                      IngestReport* report) {
  const auto rows = csv::read_file(path);
  return options.format == CountsFormat::kWide ? read_wide(rows, path, options, report)
                                               : read_long(rows, path, options, report);
}

PopulationTable read_population(const std::string& path) {
  const auto rows = csv::read_file(path);
  if (rows.empty() || rows.front().size() != 2 || rows.front()[0] != "entity" ||
      rows.front()[1] != "population") {
    throw_error(ErrorCode::kParse, "'" + path + "' header must be entity,population");
  }
  PopulationTable table;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    const std::string where = "'" + path + "' line " + std::to_string(r + 1);
    if (row.size() != 2) throw_error(ErrorCode::kParse, where + " must have 2 fields");
    const auto value = csv::parse_int(row[1]);
    if (!value) throw_error(ErrorCode::kParse, where + " has invalid population '" + row[1] + "'");
    if (!table.population.emplace(row[0], *value).second) {
      throw_error(ErrorCode::kParse, where + " repeats entity '" + row[0] + "'");
    }
  }
  return table;
}

}  // namespace nmfclust
