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

#ifndef NMFCLUST_NNDSVD_HPP_
#define NMFCLUST_NNDSVD_HPP_

#include "nmfclust/matrix.hpp"

namespace nmfclust {

// Starting factors W0 (n x r) and H0 (r x m).
struct InitPair {
  Matrix W;
  Matrix H;
};

// Nonnegative double SVD initializer (basic form, no random fill).
//
// For each of the top-r singular triplets (sigma, u, v) the vectors are split
// into positive parts (u+, v+) and negated negative parts (u-, v-). The pair
// with the larger norm product is kept (ties go to the positive pair),
// normalized, and scaled so that the rank-one term carries
// sigma * ||u'|| * ||v'||; column k of W0 and row k of H0 each receive the
// square root of that weight. Triplets with nonpositive sigma are left as
// zero. Exact zeros are returned as-is; see floor_zeros.
//
// Throws Error(kInvalidArgument) when rank is outside [1, min(n, m)] or X
// has a negative or non-finite entry. Deterministic for a given X.
InitPair nndsvd_init(const Matrix& X, Index rank);

// Lifts exact zeros so multiplicative updates can move them: each zero in a
// component (column of W, row of H) becomes max(1e-12 * component max, 1e-16).
InitPair floor_zeros(InitPair init);

}  // namespace nmfclust

#endif  // NMFCLUST_NNDSVD_HPP_
