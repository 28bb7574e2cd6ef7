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

#include "nmfclust/kmeans.hpp"

#include <limits>
#include <string>

#include "nmfclust/error.hpp"
#include "nmfclust/parallel.hpp"
#include "nmfclust/rng.hpp"

namespace nmfclust {

namespace {

int nearest(const Matrix& points, Index i, const Matrix& centroids, double* dist) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Index c = 0; c < centroids.rows(); ++c) {
    const double d = (points.row(i) - centroids.row(c)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  if (dist != nullptr) *dist = best_d;
  return best;
}

Matrix cluster_means(const Matrix& points, const std::vector<int>& assignments, Index g) {
  Matrix sums = Matrix::Zero(g, points.cols());
  std::vector<Index> counts(static_cast<std::size_t>(g), 0);
  for (Index i = 0; i < points.rows(); ++i) {
    const int c = assignments[static_cast<std::size_t>(i)];
    sums.row(c) += points.row(i);
    ++counts[static_cast<std::size_t>(c)];
  }
  for (Index c = 0; c < g; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) {
      sums.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
    }
  }
  return sums;
}

double wss_against(const Matrix& points, const std::vector<int>& assignments,
                   const Matrix& centroids) {
  double total = 0.0;
  for (Index i = 0; i < points.rows(); ++i) {
    total += (points.row(i) - centroids.row(assignments[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return total;
}

// Moves points into empty clusters. Returns the number of repairs.
int repair_empty(const Matrix& points, std::vector<int>& assignments, const Matrix& centroids) {
  const Index g = centroids.rows();
  int repairs = 0;
  for (;;) {
    std::vector<Index> counts(static_cast<std::size_t>(g), 0);
    for (int c : assignments) ++counts[static_cast<std::size_t>(c)];
    Index empty = -1;
    for (Index c = 0; c < g; ++c) {
      if (counts[static_cast<std::size_t>(c)] == 0) {
        empty = c;
        break;
      }
    }
    if (empty < 0) return repairs;
    Index far = -1;
    double far_d = -1.0;
    for (Index i = 0; i < points.rows(); ++i) {
      const int c = assignments[static_cast<std::size_t>(i)];
      if (counts[static_cast<std::size_t>(c)] < 2) continue;
      const double d = (points.row(i) - centroids.row(c)).squaredNorm();
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    if (far < 0) return repairs;  // unreachable while g <= n
    assignments[static_cast<std::size_t>(far)] = static_cast<int>(empty);
    ++repairs;
  }
}

ClusterResult canonicalize(const LloydRun& run, const Matrix& points, int g) {
  std::vector<int> relabel(static_cast<std::size_t>(g), -1);
  int next = 0;
  ClusterResult out;
  out.g = g;
  out.assignments.resize(run.assignments.size());
  for (std::size_t i = 0; i < run.assignments.size(); ++i) {
    int& id = relabel[static_cast<std::size_t>(run.assignments[i])];
    if (id < 0) id = next++;
    out.assignments[i] = id + 1;
  }
  out.centroids = Matrix::Zero(g, points.cols());
  for (int c = 0; c < g; ++c) {
    if (relabel[static_cast<std::size_t>(c)] >= 0) {
      out.centroids.row(relabel[static_cast<std::size_t>(c)]) = run.centroids.row(c);
    }
  }
  out.wss = run.wss;
  return out;
}

}  // namespace

LloydRun lloyd(const Matrix& points, Matrix centroids, int max_iterations) {
  const Index n = points.rows();
  const Index g = centroids.rows();
  if (g < 1 || g > n || centroids.cols() != points.cols()) {
    throw_error(ErrorCode::kInvalidArgument, "initial centroids do not fit the points");
  }
  LloydRun run;
  run.assignments.assign(static_cast<std::size_t>(n), -1);
  for (int it = 0; it < max_iterations; ++it) {
    std::vector<int> next(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) next[static_cast<std::size_t>(i)] = nearest(points, i, centroids, nullptr);
    const int repairs = repair_empty(points, next, centroids);
    run.empty_cluster_repairs += repairs;
    const bool changed = next != run.assignments;
    run.assignments = std::move(next);
    centroids = cluster_means(points, run.assignments, g);
    run.wss_trace.push_back(wss_against(points, run.assignments, centroids));
    run.iterations = it + 1;
    if (!changed && repairs == 0) break;
  }
  run.centroids = std::move(centroids);
  run.wss = run.wss_trace.back();
  return run;
}

double within_cluster_ss(const Matrix& points, const std::vector<int>& assignments, int g) {
  std::vector<int> zero_based(assignments);
  for (int& c : zero_based) c -= 1;
  return wss_against(points, zero_based, cluster_means(points, zero_based, g));
}

ClusterResult kmeans_best_of(const Matrix& points, int g, int restarts, std::uint64_t seed,
                             int threads) {
  const Index n = points.rows();
  if (g < 1 || g > n) {
    throw_error(ErrorCode::kInvalidArgument, "cluster count " + std::to_string(g) +
                                                 " must lie in [1, n = " + std::to_string(n) + "]");
  }
  if (restarts < 1) throw_error(ErrorCode::kInvalidArgument, "restarts must be at least 1");
  if (!points.allFinite()) throw_error(ErrorCode::kInvalidArgument, "k-means input is not finite");

  std::vector<LloydRun> runs(static_cast<std::size_t>(restarts));
  parallel_for(runs.size(), threads, [&](std::size_t k) {
    Rng rng(seed + k);
    std::vector<Index> rows(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = i;
    // Partial Fisher-Yates: the first g entries are a uniform draw without
    // replacement.
    Matrix init(g, points.cols());
    for (int c = 0; c < g; ++c) {
      const std::size_t j = static_cast<std::size_t>(c) +
                            rng.uniform_index(static_cast<std::uint64_t>(n - c));
      std::swap(rows[static_cast<std::size_t>(c)], rows[j]);
      init.row(c) = points.row(rows[static_cast<std::size_t>(c)]);
    }
    runs[k] = lloyd(points, std::move(init));
  });

  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k) {
    if (runs[k].wss < runs[best].wss) best = k;
  }
  ClusterResult out = canonicalize(runs[best], points, g);
  out.restarts_used = restarts;
  out.seed = seed;
  out.best_restart = static_cast<int>(best);
  return out;
}

std::optional<int> elbow_suggestion(const ElbowCurve& curve) {
  const std::size_t k = curve.wss_values.size();
  if (k < 3 || curve.g_values.size() != k) return std::nullopt;
  std::optional<int> best;
  double best_curv = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < k; ++i) {
    const double curv =
        curve.wss_values[i - 1] - 2.0 * curve.wss_values[i] + curve.wss_values[i + 1];
    if (curv > best_curv) {
      best_curv = curv;
      best = curve.g_values[i];
    }
  }
  return best;
}

ElbowScan elbow_scan(const Matrix& points, const std::vector<int>& g_candidates, int restarts,
                     std::uint64_t seed, int threads) {
  for (std::size_t i = 0; i < g_candidates.size(); ++i) {
    if (g_candidates[i] < 1 || g_candidates[i] > points.rows() ||
        (i > 0 && g_candidates[i] <= g_candidates[i - 1])) {
      throw_error(ErrorCode::kInvalidArgument,
                  "cluster candidates must be strictly increasing within [1, n = " +
                      std::to_string(points.rows()) + "]");
    }
  }
  ElbowScan scan;
  for (int g : g_candidates) {
    scan.fits.push_back(kmeans_best_of(points, g, restarts, seed, threads));
    scan.curve.g_values.push_back(g);
    scan.curve.wss_values.push_back(scan.fits.back().wss);
  }
  scan.suggested = elbow_suggestion(scan.curve);
  return scan;
}

}  // namespace nmfclust
