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

#include "nmfclust/rank_select.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nmfclust/error.hpp"
#include "nmfclust/parallel.hpp"
#include "nmfclust/rng.hpp"

namespace nmfclust {

namespace {

constexpr double kStratumQuantile = 0.75;

// Observed-entry column means stand in for held-out entries; a column with
// nothing observed takes the mean of all observed entries.
Matrix impute_for_init(const Matrix& X, const Matrix& V) {
  const double observed = V.sum();
  const double global_mean = observed > 0.0 ? X.cwiseProduct(V).sum() / observed : 0.0;
  Matrix filled = X;
  for (Index j = 0; j < X.cols(); ++j) {
    const double count = V.col(j).sum();
    const double mean = count > 0.0 ? X.col(j).dot(V.col(j)) / count : global_mean;
    for (Index i = 0; i < X.rows(); ++i) {
      if (V(i, j) == 0.0) filled(i, j) = mean;
    }
  }
  return filled;
}

}  // namespace

std::vector<Index> FoldPlan::fold_sizes() const {
  std::vector<Index> sizes(static_cast<std::size_t>(folds), 0);
  for (Index k = 0; k < fold_of_entry.size(); ++k) {
    ++sizes[static_cast<std::size_t>(fold_of_entry.data()[k] - 1)];
  }
  return sizes;
}

Matrix FoldPlan::mask_for(int fold) const {
  return (fold_of_entry.array() == fold).select(0.0, Matrix::Ones(fold_of_entry.rows(),
                                                                  fold_of_entry.cols()));
}

double quantile(const Matrix& X, double q) {
  std::vector<double> values(X.data(), X.data() + X.size());
  if (values.empty()) throw_error(ErrorCode::kInvalidArgument, "quantile of an empty matrix");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

FoldPlan stratified_folds(const Matrix& X, int folds, std::uint64_t seed) {
  if (folds < 2) {
    throw_error(ErrorCode::kInvalidArgument, "fold count must be at least 2, got " +
                                                 std::to_string(folds));
  }
  if (X.size() < folds) {
    throw_error(ErrorCode::kInvalidArgument,
                "fold count " + std::to_string(folds) + " exceeds the " +
                    std::to_string(X.size()) + " matrix entries");
  }
  FoldPlan plan;
  plan.folds = folds;
  plan.seed = seed;
  plan.stratum_threshold = quantile(X, kStratumQuantile);
  plan.fold_of_entry.resize(X.rows(), X.cols());

  // Column-major linear indices.
  std::vector<Index> high, low;
  for (Index k = 0; k < X.size(); ++k) {
    (X.data()[k] > plan.stratum_threshold ? high : low).push_back(k);
  }
  for (const auto* stratum : {&high, &low}) {
    if (!stratum->empty() && static_cast<Index>(stratum->size()) < folds) {
      throw_error(ErrorCode::kInvalidArgument,
                  "a stratum has only " + std::to_string(stratum->size()) +
                      " entries for " + std::to_string(folds) +
                      " folds; use a smaller fold count");
    }
  }
  plan.high_count = static_cast<Index>(high.size());

  Rng rng(seed);
  rng.shuffle(high.begin(), high.end());
  rng.shuffle(low.begin(), low.end());
  // The low stratum continues the round-robin where the high one stopped so
  // overall fold sizes stay balanced too.
  std::size_t slot = 0;
  for (const auto* stratum : {&high, &low}) {
    for (Index k : *stratum) {
      plan.fold_of_entry.data()[k] = static_cast<int>(slot % static_cast<std::size_t>(folds)) + 1;
      ++slot;
    }
  }
  return plan;
}

FoldError fold_error(const Matrix& X, const FoldPlan& plan, int fold, Index rank,
                     const SolverConfig& config) {
  const Matrix V = plan.mask_for(fold);
  const InitPair init = nndsvd_init(impute_for_init(X, V), rank);
  const Factorization fit = solve(X, V, init, config);
  const Matrix WH = fit.W * fit.H;
  FoldError out;
  out.converged = fit.converged;
  CompensatedSum sse;
  for (Index k = 0; k < X.size(); ++k) {
    if (plan.fold_of_entry.data()[k] != fold) continue;
    const double d = X.data()[k] - WH.data()[k];
    sse.add(d * d);
    ++out.held_out;
  }
  out.sse = sse.value();
  return out;
}

namespace {

RankScore score_from(int rank, const std::vector<FoldError>& errors, int folds, Index entries) {
  RankScore score;
  score.rank = rank;
  const std::size_t repeats = errors.size() / static_cast<std::size_t>(folds);
  CompensatedSum over_repeats;
  for (std::size_t rep = 0; rep < repeats; ++rep) {
    CompensatedSum pooled;
    for (int k = 0; k < folds; ++k) {
      const FoldError& e = errors[rep * static_cast<std::size_t>(folds) + static_cast<std::size_t>(k)];
      pooled.add(e.sse);
      score.per_fold_mspe.push_back(e.held_out > 0 ? e.sse / static_cast<double>(e.held_out) : 0.0);
      if (!e.converged) ++score.nonconverged_fits;
    }
    over_repeats.add(pooled.value() / static_cast<double>(entries));
  }
  score.mspe = over_repeats.value() / static_cast<double>(repeats);
  return score;
}

void check_rank(const Matrix& X, int rank) {
  if (rank < 1 || rank > std::min(X.rows(), X.cols())) {
    throw_error(ErrorCode::kInvalidArgument,
                "candidate rank " + std::to_string(rank) + " must lie in [1, min(n, m) = " +
                    std::to_string(std::min(X.rows(), X.cols())) + "]");
  }
}

}  // namespace

RankScore mspe_for_rank(const Matrix& X, const FoldPlan& plan, int rank,
                        const SolverConfig& config) {
  check_rank(X, rank);
  if (plan.fold_of_entry.rows() != X.rows() || plan.fold_of_entry.cols() != X.cols()) {
    throw_error(ErrorCode::kShapeMismatch, "fold plan does not match the data shape");
  }
  std::vector<FoldError> errors;
  for (int k = 1; k <= plan.folds; ++k) errors.push_back(fold_error(X, plan, k, rank, config));
  return score_from(rank, errors, plan.folds, X.size());
}

RankSelection select_rank(const Matrix& X, const RankSearch& search) {
  if (search.candidates.empty()) {
    throw_error(ErrorCode::kInvalidArgument, "rank candidate set is empty");
  }
  if (search.cv_repeats < 1) {
    throw_error(ErrorCode::kInvalidArgument, "cv repeats must be at least 1");
  }
  for (int r : search.candidates) check_rank(X, r);
  search.solver.validate();

  std::vector<FoldPlan> plans;
  for (int rep = 0; rep < search.cv_repeats; ++rep) {
    plans.push_back(stratified_folds(X, search.folds, search.seed + static_cast<std::uint64_t>(rep)));
  }

  const std::size_t per_rank = plans.size() * static_cast<std::size_t>(search.folds);
  const std::size_t tasks = search.candidates.size() * per_rank;
  std::vector<FoldError> errors(tasks);
  parallel_for(tasks, search.threads, [&](std::size_t t) {
    const std::size_t c = t / per_rank;
    const std::size_t rep = (t % per_rank) / static_cast<std::size_t>(search.folds);
    const int fold = static_cast<int>(t % static_cast<std::size_t>(search.folds)) + 1;
    errors[t] = fold_error(X, plans[rep], fold, search.candidates[c], search.solver);
  });

  RankSelection selection;
  for (std::size_t c = 0; c < search.candidates.size(); ++c) {
    const std::vector<FoldError> slice(errors.begin() + static_cast<std::ptrdiff_t>(c * per_rank),
                                       errors.begin() + static_cast<std::ptrdiff_t>((c + 1) * per_rank));
    selection.scores.push_back(score_from(search.candidates[c], slice, search.folds, X.size()));
  }
  const RankScore* best = nullptr;
  for (const RankScore& s : selection.scores) {
    if (best == nullptr || s.mspe < best->mspe || (s.mspe == best->mspe && s.rank < best->rank)) {
      best = &s;
    }
  }
  selection.best_rank = best->rank;
  return selection;
}

}  // namespace nmfclust
