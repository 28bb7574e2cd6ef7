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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>

#include "nmfclust/compare.hpp"
#include "nmfclust/error.hpp"
#include "test_support.hpp"

namespace nmfclust {
namespace {

SeriesMatrix as_series(const Matrix& X, const std::string& first = "2020-03-01") {
  SeriesMatrix s;
  for (Index i = 0; i < X.rows(); ++i) s.entities.push_back("e" + std::to_string(i));
  const Date d0 = Date::parse(first);
  for (Index j = 0; j < X.cols(); ++j) s.dates.push_back(d0 + static_cast<int>(j));
  s.values = X;
  return s;
}

PipelineConfig quick() {
  PipelineConfig c;
  c.rank_candidates = int_range(2, 4);
  c.restarts = 40;
  c.g_candidates = int_range(2, 6);
  return c;
}

TEST(BuildWindows, EighteenWeeklyPeriods) {
  const SeriesMatrix s = as_series(Matrix::Ones(2, 140), "2020-03-20");
  const WindowSpec spec = build_windows(s, Date::parse("2020-03-22"), Date::parse("2020-03-28"),
                                        Date::parse("2020-07-25"));
  ASSERT_EQ(spec.end_dates.size(), 18u);
  EXPECT_EQ(spec.labels.front(), "T1");
  EXPECT_EQ(spec.labels.back(), "T18");
  for (std::size_t w = 0; w < 18; ++w) {
    EXPECT_EQ(spec.end_dates[w] - spec.start + 1, static_cast<int>(7 * (w + 1)));
  }
}

TEST(BuildWindows, SingleWindowAndErrors) {
  const SeriesMatrix s = as_series(Matrix::Ones(2, 60));
  const Date d0 = Date::parse("2020-03-01");
  EXPECT_EQ(build_windows(s, d0, d0 + 9, d0 + 9).end_dates.size(), 1u);
  EXPECT_THROW(build_windows(s, d0, d0 + 5, d0 + 12), Error);   // first window under a week
  EXPECT_THROW(build_windows(s, d0, d0 + 6, d0 + 15), Error);   // not whole weeks
  EXPECT_THROW(build_windows(s, d0, d0 + 6, d0 + 62), Error);   // past the data
  EXPECT_THROW(build_windows(s, d0 - 1, d0 + 6, d0 + 13), Error);
}

TEST(FlagDrops, RuleAndBoundaries) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> series{1.0, 1.0, 0.1, 1.0};
  EXPECT_EQ(flag_drops(series, 0.5, 0.3), (std::vector<std::size_t>{3}));
  // First pair has no predecessor and is never flagged.
  series = {0.0, 1.0};
  EXPECT_TRUE(flag_drops(series, 0.5, 0.3).empty());
  // Low but not a drop; a drop but not low.
  series = {0.45, 0.4, 1.0, 0.6};
  EXPECT_TRUE(flag_drops(series, 0.5, 0.3).empty());
  // Exactly at the thresholds does not fire.
  series = {1.0, 0.5, 0.75, 0.5, 0.625, 0.375};
  EXPECT_TRUE(flag_drops(series, 0.5, 0.25).empty());
  series = {1.0, nan, 0.0, 0.9, 0.1};
  EXPECT_EQ(flag_drops(series, 0.5, 0.3), (std::vector<std::size_t>{5}));
}

TEST(SeriesSlicing, WindowsAreNested) {
  Rng rng(3);
  const SeriesMatrix s = as_series(testing::uniform_matrix(4, 35, rng));
  const Date d0 = Date::parse("2020-03-01");
  const WindowSpec spec = build_windows(s, d0, d0 + 6, d0 + 34);
  const SeriesMatrix last = s.slice(d0, spec.end_dates.back());
  for (std::size_t w = 0; w < spec.end_dates.size(); ++w) {
    const SeriesMatrix t = s.slice(d0, spec.end_dates[w]);
    EXPECT_EQ(t.cols(), static_cast<Index>(7 * (w + 1)));
    EXPECT_EQ(t.values, last.values.leftCols(t.cols()));
  }
}

TEST(Pipeline, OverrideAndCaps) {
  const testing::ClusteredSeries d = testing::seven_template_series(2, 42);
  PipelineConfig c = quick();
  c.clusters = 3;
  const PipelineResult r = run_pipeline(d.X, c);
  EXPECT_EQ(r.g, 3);
  EXPECT_TRUE(r.g_overridden);
  EXPECT_EQ(std::set<int>(r.clusters.assignments.begin(), r.clusters.assignments.end()).size(), 3u);
  EXPECT_EQ(r.ranks.scores.size(), 3u);

  c = quick();
  c.rank_candidates = int_range(2, 12);
  c.g_candidates = int_range(2, 10);
  const Matrix narrow = d.X.leftCols(5);
  const PipelineResult capped = run_pipeline(narrow, c);
  EXPECT_EQ(capped.rank_candidates, (std::vector<int>{2, 3, 4}));

  c.rank_candidates = {6, 7};
  EXPECT_THROW(run_pipeline(narrow, c), Error);
  c = quick();
  c.clusters = 50;
  EXPECT_THROW(run_pipeline(d.X, c), Error);
  c = quick();
  c.g_candidates = {2, 3};
  EXPECT_THROW(run_pipeline(d.X, c), Error);  // no elbow, no override
}

TEST(Pipeline, DeterministicForSeed) {
  const testing::ClusteredSeries d = testing::seven_template_series(4, 42);
  const PipelineResult a = run_pipeline(d.X, quick());
  const PipelineResult b = run_pipeline(d.X, quick());
  EXPECT_EQ(a.rank, b.rank);
  EXPECT_EQ(a.g, b.g);
  EXPECT_EQ(a.clusters.assignments, b.clusters.assignments);
  EXPECT_EQ(a.fit.W, b.fit.W);
  EXPECT_EQ(a.elbow.curve.wss_values, b.elbow.curve.wss_values);
}

TEST(Scan, StationaryStructureHasNoFlags) {
  const testing::SwitchingSeries d = testing::switching_series(8, 18, 42, 1000);
  const SeriesMatrix s = as_series(d.X);
  const Date d0 = Date::parse("2020-03-01");
  const ScanResult r = scan(s, build_windows(s, d0, d0 + 13, d0 + 41), ScanConfig{quick()});
  ASSERT_EQ(r.per_window.size(), 5u);
  ASSERT_EQ(r.ari_series.size(), 4u);
  for (double a : r.ari_series) EXPECT_EQ(a, 1.0);
  EXPECT_TRUE(r.flagged_windows.empty());
  for (const WindowResult& w : r.per_window) {
    EXPECT_TRUE(w.ok);
    EXPECT_EQ(adjusted_rand_index(w.result.clusters.assignments, d.before), 1.0);
  }
}

TEST(Scan, PlantedSwitchIsFlagged) {
  const testing::SwitchingSeries d = testing::switching_series(1, 18, 56, 35);
  const SeriesMatrix s = as_series(d.X);
  const Date d0 = Date::parse("2020-03-01");
  const ScanResult r = scan(s, build_windows(s, d0, d0 + 20, d0 + 55), ScanConfig{quick()});
  ASSERT_EQ(r.ari_series.size(), 5u);
  std::size_t lowest = 0;
  for (std::size_t i = 1; i < r.ari_series.size(); ++i) {
    if (r.ari_series[i] < r.ari_series[lowest]) lowest = i;
  }
  EXPECT_EQ(lowest, 2u);  // the (T3, T4) pair
  EXPECT_EQ(r.flagged_windows, (std::vector<std::string>{"T4"}));
}

TEST(Scan, FailedWindowIsRecordedNotFatal) {
  const testing::SwitchingSeries d = testing::switching_series(8, 12, 28, 1000);
  const SeriesMatrix s = as_series(d.X);
  const Date d0 = Date::parse("2020-03-01");
  ScanConfig c{quick()};
  c.pipeline.rank_candidates = {8};  // exceeds the 7-day window's cap
  const ScanResult r = scan(s, build_windows(s, d0, d0 + 6, d0 + 27), c);
  ASSERT_EQ(r.per_window.size(), 4u);
  EXPECT_FALSE(r.per_window[0].ok);
  EXPECT_NE(r.per_window[0].error.find("E_INVALID_ARGUMENT"), std::string::npos);
  EXPECT_TRUE(std::isnan(r.ari_series[0]));
  EXPECT_TRUE(r.per_window[1].ok);
  EXPECT_FALSE(std::isnan(r.ari_series[1]));
}

TEST(ComparePeriods, IdenticalAndDisjointRegimes) {
  const testing::SwitchingSeries d = testing::switching_series(5, 18, 56, 28);
  const SeriesMatrix s = as_series(d.X);
  const Date d0 = Date::parse("2020-03-01");
  const PeriodComparison same = compare_periods(s, d0, d0 + 20, d0, d0 + 20, quick());
  EXPECT_EQ(same.ari, 1.0);
  const PeriodComparison split = compare_periods(s, d0, d0 + 27, d0 + 28, d0 + 55, quick());
  EXPECT_NEAR(split.ari, testing::ari_by_pairs(d.before, d.after), 1e-12);
  EXPECT_THROW(compare_periods(s, d0, d0 + 27, d0 + 50, d0 + 70, quick()), Error);
}

}  // namespace
}  // namespace nmfclust
