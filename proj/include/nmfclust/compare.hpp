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

#ifndef NMFCLUST_COMPARE_HPP_
#define NMFCLUST_COMPARE_HPP_

#include <span>
#include <string>
#include <vector>

namespace nmfclust {

// Cluster membership keyed by entity label. Cluster ids are arbitrary ints.
struct Partition {
  std::vector<std::string> entities;
  std::vector<int> cluster_of;  // aligned with entities
};

// Hubert-Arabie adjusted Rand index of two labelings of the same n points,
// evaluated in exact integer arithmetic. When the denominator vanishes (both
// labelings all-singletons, or both a single cluster) the result is 1.
// Throws Error(kInvalidArgument) on length mismatch or n > 1e6.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

// Entities are matched by label, so the two partitions may list them in
// different orders. Throws Error(kValidation) listing the symmetric
// difference when the entity sets differ.
double adjusted_rand_index(const Partition& a, const Partition& b);

}  // namespace nmfclust

#endif  // NMFCLUST_COMPARE_HPP_
