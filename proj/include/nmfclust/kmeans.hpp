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

#ifndef NMFCLUST_KMEANS_HPP_
#define NMFCLUST_KMEANS_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "nmfclust/matrix.hpp"

namespace nmfclust {

struct ClusterResult {
  // Cluster id per point in 1..g. Ids are canonical: clusters are numbered
  // in order of their first member.
  std::vector<int> assignments;
  Matrix centroids;  // g x d, row c-1 is cluster c
  double wss = 0.0;
  int g = 0;
  int restarts_used = 0;
  std::uint64_t seed = 0;
  int best_restart = 0;
};

// One Lloyd run with its per-iteration within-cluster sum of squares.
struct LloydRun {
  std::vector<int> assignments;  // 0-based, not canonicalized
  Matrix centroids;
  double wss = 0.0;
  std::vector<double> wss_trace;
  int iterations = 0;
  int empty_cluster_repairs = 0;
};

// Lloyd iterations from the given centroids until assignments stop changing
// or max_iterations. Ties go to the lower cluster index. A cluster left
// empty receives the point farthest from its centroid among clusters with
// more than one member.
LloydRun lloyd(const Matrix& points, Matrix centroids, int max_iterations = 300);

// Sum of squared distances of each point to the mean of its cluster.
double within_cluster_ss(const Matrix& points, const std::vector<int>& assignments, int g);

// Best (minimum WSS) of `restarts` Lloyd runs. Restart k draws its initial
// centroids as g distinct rows, uniformly without replacement, from an
// Rng(seed + k). Ties in WSS go to the lowest restart index.
// Throws Error(kInvalidArgument) when g is outside [1, n] or restarts < 1.
ClusterResult kmeans_best_of(const Matrix& points, int g, int restarts, std::uint64_t seed,
                             int threads = 1);

struct ElbowCurve {
  std::vector<int> g_values;
  std::vector<double> wss_values;
};

// g maximizing WSS(g-1) - 2 WSS(g) + WSS(g+1) over interior candidates; ties
// go to the smaller g. nullopt for fewer than three candidates.
std::optional<int> elbow_suggestion(const ElbowCurve& curve);

struct ElbowScan {
  ElbowCurve curve;
  std::optional<int> suggested;
  std::vector<ClusterResult> fits;  // aligned with curve.g_values
};

// Throws Error(kInvalidArgument) unless candidates are strictly increasing
// and within [1, n].
ElbowScan elbow_scan(const Matrix& points, const std::vector<int>& g_candidates, int restarts,
                     std::uint64_t seed, int threads = 1);

}  // namespace nmfclust

#endif  // NMFCLUST_KMEANS_HPP_
