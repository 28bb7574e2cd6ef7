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

#ifndef NMFCLUST_RANK_SELECT_HPP_
#define NMFCLUST_RANK_SELECT_HPP_

#include <cstdint>
#include <vector>

#include "nmfclust/matrix.hpp"
#include "nmfclust/wnmf.hpp"

namespace nmfclust {

// Assignment of every matrix entry to one of `folds` cross-validation folds.
struct FoldPlan {
  Eigen::MatrixXi fold_of_entry;  // values in 1..folds
  int folds = 0;
  double stratum_threshold = 0.0;  // entries strictly above it are "high"
  std::uint64_t seed = 0;
  Index high_count = 0;

  std::vector<Index> fold_sizes() const;
  // 0 on fold k (1-based), 1 elsewhere.
  Matrix mask_for(int fold) const;
};

// Linear-interpolation quantile (R type 7) of all entries, q in [0, 1].
double quantile(const Matrix& X, double q);

// Splits entries at the 75th percentile into a low (<=) and high (>) stratum,
// shuffles each stratum with the seed, and deals entries round-robin so fold
// sizes differ by at most one within each stratum and overall.
//
// Throws Error(kInvalidArgument) when folds < 2, n*m < folds, or a nonempty
// stratum holds fewer than `folds` entries.
FoldPlan stratified_folds(const Matrix& X, int folds, std::uint64_t seed);

struct FoldError {
  double sse = 0.0;
  Index held_out = 0;
  bool converged = true;
};

// Held-out squared error for one fold: the initializer sees X with the fold
// replaced by observed column means, the solver sees the true mask.
FoldError fold_error(const Matrix& X, const FoldPlan& plan, int fold, Index rank,
                     const SolverConfig& config);

struct RankScore {
  int rank = 0;
  double mspe = 0.0;                  // pooled over all entries, mean over repeats
  std::vector<double> per_fold_mspe;  // fold-major within each repeat
  int nonconverged_fits = 0;
};

RankScore mspe_for_rank(const Matrix& X, const FoldPlan& plan, int rank,
                        const SolverConfig& config);

struct RankSelection {
  int best_rank = 0;
  std::vector<RankScore> scores;  // in candidate order
};

struct RankSearch {
  std::vector<int> candidates;
  int folds = 10;
  int cv_repeats = 1;
  std::uint64_t seed = 1;
  SolverConfig solver;
  int threads = 1;
};

// Minimum-MSPE rank; ties go to the smaller rank. Repeat k uses the fold
// plan seeded with seed + k. Throws Error(kInvalidArgument) for an empty
// candidate set or a candidate outside [1, min(n, m)].
RankSelection select_rank(const Matrix& X, const RankSearch& search);

}  // namespace nmfclust

#endif  // NMFCLUST_RANK_SELECT_HPP_
