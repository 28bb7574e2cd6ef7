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

#include "nmfclust/pipeline.hpp"

#include <algorithm>
#include <string>

#include "nmfclust/error.hpp"

namespace nmfclust {

std::vector<int> int_range(int first, int last) {
  std::vector<int> out;
  for (int v = first; v <= last; ++v) out.push_back(v);
  return out;
}

void PipelineConfig::validate() const {
  if (rank_candidates.empty()) throw_error(ErrorCode::kInvalidArgument, "no rank candidates");
  if (g_candidates.empty() && !clusters) {
    throw_error(ErrorCode::kInvalidArgument, "no cluster-count candidates");
  }
  for (int r : rank_candidates) {
    if (r < 1) throw_error(ErrorCode::kInvalidArgument, "rank candidates must be positive");
  }
  for (int g : g_candidates) {
    if (g < 1) throw_error(ErrorCode::kInvalidArgument, "cluster candidates must be positive");
  }
  if (folds < 2) throw_error(ErrorCode::kInvalidArgument, "folds must be at least 2");
  if (cv_repeats < 1) throw_error(ErrorCode::kInvalidArgument, "cv repeats must be at least 1");
  if (restarts < 1) throw_error(ErrorCode::kInvalidArgument, "restarts must be at least 1");
  if (clusters && *clusters < 1) {
    throw_error(ErrorCode::kInvalidArgument, "cluster override must be positive");
  }
  if (threads < 1) throw_error(ErrorCode::kInvalidArgument, "threads must be at least 1");
  solver.validate();
}

PipelineResult run_pipeline(const Matrix& X, const PipelineConfig& config) {
  config.validate();
  PipelineResult out;

  const int rank_cap = static_cast<int>(std::min(X.rows(), X.cols())) - 1;
  for (int r : config.rank_candidates) {
    if (r <= rank_cap) out.rank_candidates.push_back(r);
  }
  std::sort(out.rank_candidates.begin(), out.rank_candidates.end());
  out.rank_candidates.erase(std::unique(out.rank_candidates.begin(), out.rank_candidates.end()),
                            out.rank_candidates.end());
  if (out.rank_candidates.empty()) {
    throw_error(ErrorCode::kInvalidArgument,
                "no rank candidate is at most min(n, m) - 1 = " + std::to_string(rank_cap) +
                    " for a " + std::to_string(X.rows()) + "x" + std::to_string(X.cols()) +
                    " matrix");
  }

  RankSearch search;
  search.candidates = out.rank_candidates;
  search.folds = config.folds;
  search.cv_repeats = config.cv_repeats;
  search.seed = config.seed;
  search.solver = config.solver;
  search.threads = config.threads;
  out.ranks = select_rank(X, search);
  out.rank = out.ranks.best_rank;
  out.fit = factorize(X, out.rank, config.solver);

  const int n = static_cast<int>(X.rows());
  for (int g : config.g_candidates) {
    if (g <= n) out.g_candidates.push_back(g);
  }
  std::sort(out.g_candidates.begin(), out.g_candidates.end());
  out.g_candidates.erase(std::unique(out.g_candidates.begin(), out.g_candidates.end()),
                         out.g_candidates.end());
  out.elbow = elbow_scan(out.fit.W, out.g_candidates, config.restarts, config.seed,
                         config.threads);

  if (config.clusters) {
    if (*config.clusters > n) {
      throw_error(ErrorCode::kInvalidArgument, "cluster override " +
                                                   std::to_string(*config.clusters) +
                                                   " exceeds the " + std::to_string(n) +
                                                   " entities");
    }
    out.g = *config.clusters;
    out.g_overridden = true;
  } else if (out.elbow.suggested) {
    out.g = *out.elbow.suggested;
  } else if (out.g_candidates.size() == 1) {
    out.g = out.g_candidates.front();
  } else {
    throw_error(ErrorCode::kInvalidArgument,
                "the elbow needs at least 3 cluster candidates; pass an explicit cluster count");
  }

  const auto it = std::find(out.g_candidates.begin(), out.g_candidates.end(), out.g);
  if (it != out.g_candidates.end()) {
    out.clusters = out.elbow.fits[static_cast<std::size_t>(it - out.g_candidates.begin())];
  } else {
    out.clusters = kmeans_best_of(out.fit.W, out.g, config.restarts, config.seed, config.threads);
  }
  return out;
}

}  // namespace nmfclust
