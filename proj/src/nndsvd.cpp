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

#include "nmfclust/nndsvd.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

#include "nmfclust/error.hpp"

namespace nmfclust {

namespace {

constexpr double kRelativeFloor = 1e-12;
constexpr double kAbsoluteFloor = 1e-16;

template <class Derived>
void floor_component(Eigen::DenseBase<Derived>&& component) {
  const double top = component.maxCoeff();
  const double floor = std::max(kRelativeFloor * top, kAbsoluteFloor);
  for (Index k = 0; k < component.size(); ++k) {
    if (component(k) == 0.0) component(k) = floor;
  }
}

}  // namespace

InitPair nndsvd_init(const Matrix& X, Index rank) {
  const Index n = X.rows();
  const Index m = X.cols();
  if (rank < 1 || rank > std::min(n, m)) {
    throw_error(ErrorCode::kInvalidArgument,
                "rank " + std::to_string(rank) + " must lie in [1, min(n, m) = " +
                    std::to_string(std::min(n, m)) + "]");
  }
  if (!X.allFinite() || (X.array() < 0.0).any()) {
    throw_error(ErrorCode::kInvalidArgument,
                "NNDSVD input must be finite and nonnegative");
  }

  InitPair init{Matrix::Zero(n, rank), Matrix::Zero(rank, m)};
  if (X.isZero(0.0)) return init;

  Eigen::BDCSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const Matrix& U = svd.matrixU();
  const Matrix& V = svd.matrixV();

  for (Index k = 0; k < rank; ++k) {
    if (!(sigma(k) > 0.0)) continue;
    const Vector u = U.col(k);
    const Vector v = V.col(k);
    const Vector u_pos = u.cwiseMax(0.0);
    const Vector v_pos = v.cwiseMax(0.0);
    const Vector u_neg = (-u).cwiseMax(0.0);
    const Vector v_neg = (-v).cwiseMax(0.0);
    const double u_pos_norm = u_pos.norm();
    const double v_pos_norm = v_pos.norm();
    const double u_neg_norm = u_neg.norm();
    const double v_neg_norm = v_neg.norm();
    const double pos_mass = u_pos_norm * v_pos_norm;
    const double neg_mass = u_neg_norm * v_neg_norm;

    const bool positive = pos_mass >= neg_mass;
    const double mass = positive ? pos_mass : neg_mass;
    if (!(mass > 0.0)) continue;
    const double scale = std::sqrt(sigma(k) * mass);
    if (positive) {
      init.W.col(k) = scale * u_pos / u_pos_norm;
      init.H.row(k) = scale * v_pos.transpose() / v_pos_norm;
    } else {
      init.W.col(k) = scale * u_neg / u_neg_norm;
      init.H.row(k) = scale * v_neg.transpose() / v_neg_norm;
    }
  }
  return init;
}

InitPair floor_zeros(InitPair init) {
  for (Index k = 0; k < init.W.cols(); ++k) floor_component(init.W.col(k));
  for (Index k = 0; k < init.H.rows(); ++k) floor_component(init.H.row(k));
  return init;
}

}  // namespace nmfclust
