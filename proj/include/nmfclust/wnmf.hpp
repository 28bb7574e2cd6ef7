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

#ifndef NMFCLUST_WNMF_HPP_
#define NMFCLUST_WNMF_HPP_

#include <vector>

#include "nmfclust/matrix.hpp"
#include "nmfclust/nndsvd.hpp"

namespace nmfclust {

struct SolverConfig {
  int max_iterations = 2000;
  // Stop once max - min of the trailing window of costs falls below
  // tolerance * (cost at the starting point).
  double tolerance = 1e-6;
  int stationarity_window = 40;
  double epsilon_guard = 1e-12;

  // Throws Error(kInvalidArgument) on nonpositive knobs or a window longer
  // than max_iterations.
  void validate() const;
};

struct Factorization {
  Matrix W;  // n x r basis coefficients
  Matrix H;  // r x m bases
  double initial_cost = 0.0;
  std::vector<double> cost_trace;  // one entry per iteration, after the W update
  int iterations = 0;
  bool converged = false;
  // Rows of V.*X (resp. columns) that are entirely zero; the matching rows of
  // W (columns of H) stay at the epsilon floor.
  std::vector<Index> frozen_rows;
  std::vector<Index> frozen_cols;

  double final_cost() const { return cost_trace.empty() ? initial_cost : cost_trace.back(); }
};

// sum_ij v_ij (x_ij - (WH)_ij)^2. Throws Error(kShapeMismatch).
double weighted_cost(const Matrix& X, const Matrix& V, const Matrix& W, const Matrix& H);

// H .* [W'(X.*V)] ./ [W'((WH).*V) + eps]
Matrix update_H(const Matrix& X, const Matrix& V, const Matrix& W, const Matrix& H,
                double epsilon_guard = 1e-12);
// W .* [(X.*V)H'] ./ [((WH).*V)H' + eps]
Matrix update_W(const Matrix& X, const Matrix& V, const Matrix& W, const Matrix& H,
                double epsilon_guard = 1e-12);

// Alternating multiplicative updates (H, then W with the new H) from
// floor_zeros(init). The rank is taken from init.
Factorization solve(const Matrix& X, const Matrix& V, const InitPair& init,
                    const SolverConfig& config = {});

// nndsvd_init + solve with an all-ones mask.
Factorization factorize(const Matrix& X, Index rank, const SolverConfig& config = {});

}  // namespace nmfclust

#endif  // NMFCLUST_WNMF_HPP_
