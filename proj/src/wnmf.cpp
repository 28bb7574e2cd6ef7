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

#include "nmfclust/wnmf.hpp"

#include <algorithm>
#include <string>

#include "nmfclust/error.hpp"

namespace nmfclust {

namespace {

std::string shape(const Matrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

void check_shapes(const Matrix& X, const Matrix& V, const Matrix& W, const Matrix& H) {
  if (V.rows() != X.rows() || V.cols() != X.cols() || W.rows() != X.rows() ||
      H.cols() != X.cols() || W.cols() != H.rows()) {
    throw_error(ErrorCode::kShapeMismatch, "nonconforming shapes: X " + shape(X) + ", V " +
                                               shape(V) + ", W " + shape(W) + ", H " + shape(H));
  }
}

double cost_of(const Matrix& X, const Matrix& V, const Matrix& WH) {
  return (V.array() * (X - WH).array().square()).sum();
}

// The update kernels below are shared by the public single-step functions and
// by solve, so both follow the same floating-point path.
Matrix next_H(const Matrix& XV, const Matrix& V, const Matrix& W, const Matrix& H,
              const Matrix& WH, double eps) {
  const Matrix numer = W.transpose() * XV;
  const Matrix denom = W.transpose() * WH.cwiseProduct(V);
  return H.array() * numer.array() / (denom.array() + eps);
}

Matrix next_W(const Matrix& XV, const Matrix& V, const Matrix& W, const Matrix& H,
              const Matrix& WH, double eps) {
  const Matrix numer = XV * H.transpose();
  const Matrix denom = WH.cwiseProduct(V) * H.transpose();
  return W.array() * numer.array() / (denom.array() + eps);
}

bool stationary(const std::vector<double>& trace, int window, double threshold) {
  if (trace.size() < static_cast<std::size_t>(window)) return false;
  const auto first = trace.end() - window;
  const auto [lo, hi] = std::minmax_element(first, trace.end());
  const double spread = *hi - *lo;
  return spread < threshold || spread == 0.0;
}

}  // namespace

void SolverConfig::validate() const {
  if (max_iterations < 1 || stationarity_window < 1 || !(tolerance > 0.0) ||
      !(epsilon_guard > 0.0)) {
    throw_error(ErrorCode::kInvalidArgument,
                "solver knobs must be positive (max_iterations, tolerance, "
                "stationarity_window, epsilon_guard)");
  }
  if (stationarity_window > max_iterations) {
    throw_error(ErrorCode::kInvalidArgument,
                "stationarity_window " + std::to_string(stationarity_window) +
                    " exceeds max_iterations " + std::to_string(max_iterations));
  }
}

double weighted_cost(const Matrix& X, const Matrix& V, const Matrix& W, const Matrix& H) {
  check_shapes(X, V, W, H);
  return cost_of(X, V, W * H);
}

Matrix update_H(const Matrix& X, const Matrix& V, const Matrix& W, const Matrix& H,
                double epsilon_guard) {
  check_shapes(X, V, W, H);
  const Matrix WH = W * H;
  return next_H(X.cwiseProduct(V), V, W, H, WH, epsilon_guard);
}

Matrix update_W(const Matrix& X, const Matrix& V, const Matrix& W, const Matrix& H,
                double epsilon_guard) {
  check_shapes(X, V, W, H);
  const Matrix WH = W * H;
  return next_W(X.cwiseProduct(V), V, W, H, WH, epsilon_guard);
}

Factorization solve(const Matrix& X, const Matrix& V, const InitPair& init,
                    const SolverConfig& config) {
  config.validate();
  check_shapes(X, V, init.W, init.H);
  if ((V.array() < 0.0).any() || (V.array() > 1.0).any()) {
    throw_error(ErrorCode::kInvalidArgument, "mask entries must lie in [0, 1]");
  }
  if (!X.allFinite() || (X.array() < 0.0).any()) {
    throw_error(ErrorCode::kInvalidArgument, "data matrix must be finite and nonnegative");
  }

  Factorization fit;
  const InitPair start = floor_zeros(init);
  fit.W = start.W;
  fit.H = start.H;

  const Matrix XV = X.cwiseProduct(V);
  for (Index i = 0; i < XV.rows(); ++i) {
    if (XV.row(i).isZero(0.0)) fit.frozen_rows.push_back(i);
  }
  for (Index j = 0; j < XV.cols(); ++j) {
    if (XV.col(j).isZero(0.0)) fit.frozen_cols.push_back(j);
  }

  Matrix WH = fit.W * fit.H;
  fit.initial_cost = cost_of(X, V, WH);
  // Floor at rounding level of the data so an exact start can still stop.
  const double data_scale = (V.array() * X.array().square()).sum();
  const double threshold =
      std::max(config.tolerance * fit.initial_cost, 1e-12 * data_scale);
  fit.cost_trace.reserve(static_cast<std::size_t>(config.max_iterations));

  for (int it = 0; it < config.max_iterations; ++it) {
    Matrix H = next_H(XV, V, fit.W, fit.H, WH, config.epsilon_guard);
    for (Index j : fit.frozen_cols) H.col(j) = fit.H.col(j);
    fit.H = std::move(H);

    WH.noalias() = fit.W * fit.H;
    Matrix W = next_W(XV, V, fit.W, fit.H, WH, config.epsilon_guard);
    for (Index i : fit.frozen_rows) W.row(i) = fit.W.row(i);
    fit.W = std::move(W);

    WH.noalias() = fit.W * fit.H;
    fit.cost_trace.push_back(cost_of(X, V, WH));
    fit.iterations = it + 1;
    if (stationary(fit.cost_trace, config.stationarity_window, threshold)) {
      fit.converged = true;
      break;
    }
  }
  return fit;
}

Factorization factorize(const Matrix& X, Index rank, const SolverConfig& config) {
  const Matrix ones = Matrix::Ones(X.rows(), X.cols());
  return solve(X, ones, nndsvd_init(X, rank), config);
}

}  // namespace nmfclust
