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

#include "nmfclust/temporal_scan.hpp"

#include <cmath>
#include <limits>

#include "nmfclust/compare.hpp"
#include "nmfclust/error.hpp"

namespace nmfclust {

WindowSpec build_windows(const SeriesMatrix& series, const Date& start, const Date& first_end,
                         const Date& last_end) {
  series.column_of(start);
  series.column_of(first_end);
  series.column_of(last_end);
  if (first_end - start < 6) {
    throw_error(ErrorCode::kInvalidArgument,
                "first window " + start.iso() + ".." + first_end.iso() +
                    " is shorter than 7 days");
  }
  if (last_end < first_end || (last_end - first_end) % 7 != 0) {
    throw_error(ErrorCode::kInvalidArgument,
                "last end date " + last_end.iso() + " is not " + first_end.iso() +
                    " plus a whole number of weeks");
  }
  WindowSpec spec;
  spec.start = start;
  for (Date end = first_end; end <= last_end; end = end + 7) {
    spec.end_dates.push_back(end);
    spec.labels.push_back("T" + std::to_string(spec.end_dates.size()));
  }
  return spec;
}

std::vector<std::size_t> flag_drops(std::span<const double> ari_series, double flag_abs,
                                    double flag_drop) {
  std::vector<std::size_t> flagged;
  for (std::size_t i = 1; i < ari_series.size(); ++i) {
    const double prev = ari_series[i - 1];
    const double cur = ari_series[i];
    if (std::isnan(prev) || std::isnan(cur)) continue;
    if (cur < flag_abs && prev - cur > flag_drop) flagged.push_back(i + 1);
  }
  return flagged;
}

WindowResult run_window(const SeriesMatrix& series, const std::string& label, const Date& start,
                        const Date& end, const PipelineConfig& config) {
  WindowResult window;
  window.label = label;
  window.start = start;
  window.end = end;
  try {
    const SeriesMatrix slice = series.slice(start, end);
    window.columns = slice.cols();
    window.result = run_pipeline(slice.values, config);
    window.ok = true;
  } catch (const Error& e) {
    window.error = std::string(error_code_name(e.code())) + ": " + e.what();
  }
  return window;
}

ScanResult scan(const SeriesMatrix& series, const WindowSpec& spec, const ScanConfig& config) {
  config.pipeline.validate();
  ScanResult out;
  for (std::size_t w = 0; w < spec.end_dates.size(); ++w) {
    out.per_window.push_back(
        run_window(series, spec.labels[w], spec.start, spec.end_dates[w], config.pipeline));
  }
  for (std::size_t w = 0; w + 1 < out.per_window.size(); ++w) {
    const WindowResult& a = out.per_window[w];
    const WindowResult& b = out.per_window[w + 1];
    out.ari_series.push_back(a.ok && b.ok ? adjusted_rand_index(a.result.clusters.assignments,
                                                                b.result.clusters.assignments)
                                          : std::numeric_limits<double>::quiet_NaN());
  }
  for (std::size_t w : flag_drops(out.ari_series, config.flag_abs, config.flag_drop)) {
    out.flagged_windows.push_back(out.per_window[w].label);
  }
  return out;
}

PeriodComparison compare_periods(const SeriesMatrix& series, const Date& start_a,
                                 const Date& end_a, const Date& start_b, const Date& end_b,
                                 const PipelineConfig& config) {
  PeriodComparison out;
  out.a = run_window(series, "A", start_a, end_a, config);
  out.b = run_window(series, "B", start_b, end_b, config);
  for (const WindowResult* w : {&out.a, &out.b}) {
    if (!w->ok) {
      throw_error(ErrorCode::kInvalidArgument, "window " + w->start.iso() + ".." +
                                                   w->end.iso() + " failed: " + w->error);
    }
  }
  out.ari = adjusted_rand_index(out.a.result.clusters.assignments,
                                out.b.result.clusters.assignments);
  return out;
}

}  // namespace nmfclust
