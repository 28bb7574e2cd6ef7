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

#ifndef NMFCLUST_TEMPORAL_SCAN_HPP_
#define NMFCLUST_TEMPORAL_SCAN_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nmfclust/date.hpp"
#include "nmfclust/pipeline.hpp"
#include "nmfclust/preprocess.hpp"

namespace nmfclust {

// Nested windows sharing one start date, with end dates one week apart.
struct WindowSpec {
  Date start;
  std::vector<Date> end_dates;
  std::vector<std::string> labels;  // "T1", "T2", ...
};

// Throws Error(kInvalidArgument) when a date lies outside the series, the
// first window is shorter than 7 days, or last_end is not first_end plus a
// whole number of weeks.
WindowSpec build_windows(const SeriesMatrix& series, const Date& start, const Date& first_end,
                         const Date& last_end);

struct WindowResult {
  std::string label;
  Date start;
  Date end;
  Index columns = 0;
  bool ok = false;
  std::string error;  // set when the pipeline failed on this window
  PipelineResult result;
};

struct ScanConfig {
  PipelineConfig pipeline;
  // Flag T_{i+1} when ARI(T_i, T_{i+1}) < flag_abs and it dropped by more
  // than flag_drop from ARI(T_{i-1}, T_i).
  double flag_abs = 0.5;
  double flag_drop = 0.3;
};

struct ScanResult {
  std::vector<WindowResult> per_window;
  std::vector<double> ari_series;  // NaN where either window failed
  std::vector<std::string> flagged_windows;
};

// Indices of flagged windows for an ARI series (pair i compares windows i
// and i+1). The first pair has no predecessor and is never flagged.
std::vector<std::size_t> flag_drops(std::span<const double> ari_series, double flag_abs,
                                    double flag_drop);

WindowResult run_window(const SeriesMatrix& series, const std::string& label, const Date& start,
                        const Date& end, const PipelineConfig& config);

ScanResult scan(const SeriesMatrix& series, const WindowSpec& spec, const ScanConfig& config);

struct PeriodComparison {
  WindowResult a;
  WindowResult b;
  double ari = 0.0;
};

// Runs the pipeline independently on two windows and compares partitions.
// Throws the first window failure.
PeriodComparison compare_periods(const SeriesMatrix& series, const Date& start_a,
                                 const Date& end_a, const Date& start_b, const Date& end_b,
                                 const PipelineConfig& config);

}  // namespace nmfclust

#endif  // NMFCLUST_TEMPORAL_SCAN_HPP_
