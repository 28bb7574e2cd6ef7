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

#ifndef NMFCLUST_PIPELINE_HPP_
#define NMFCLUST_PIPELINE_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "nmfclust/kmeans.hpp"
#include "nmfclust/matrix.hpp"
#include "nmfclust/rank_select.hpp"
#include "nmfclust/wnmf.hpp"

namespace nmfclust {

std::vector<int> int_range(int first, int last);

struct PipelineConfig {
  std::vector<int> rank_candidates = int_range(2, 12);
  int folds = 10;
  int cv_repeats = 1;
  int restarts = 500;
  std::vector<int> g_candidates = int_range(2, 10);
  std::optional<int> clusters;  // manual override of the elbow suggestion
  std::uint64_t seed = 1;
  SolverConfig solver;
  int threads = 1;  // does not affect results

  void validate() const;
};

struct PipelineResult {
  std::vector<int> rank_candidates;  // after capping at min(n, m) - 1
  RankSelection ranks;
  int rank = 0;
  Factorization fit;
  std::vector<int> g_candidates;  // after capping at n
  ElbowScan elbow;
  int g = 0;
  bool g_overridden = false;
  ClusterResult clusters;
};

// Cross-validated rank, full-data WNMF at that rank, elbow scan over k-means
// on the rows of W, and the final partition. Throws Error(kInvalidArgument)
// when no rank candidate survives the cap or no cluster count can be chosen.
PipelineResult run_pipeline(const Matrix& X, const PipelineConfig& config);

}  // namespace nmfclust

#endif  // NMFCLUST_PIPELINE_HPP_
