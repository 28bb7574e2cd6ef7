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

#include "nmfclust/compare.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "nmfclust/error.hpp"

namespace nmfclust {

namespace {

using Wide = __int128;

Wide choose2(std::int64_t k) { return static_cast<Wide>(k) * (k - 1) / 2; }

std::vector<int> dense_ids(std::span<const int> labels, int* count) {
  std::unordered_map<int, int> ids;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int label : labels) {
    const auto [it, inserted] = ids.emplace(label, static_cast<int>(ids.size()));
    out.push_back(it->second);
  }
  *count = static_cast<int>(ids.size());
  return out;
}

}  // namespace

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) {
    throw_error(ErrorCode::kInvalidArgument, "partitions have different sizes (" +
                                                 std::to_string(a.size()) + " vs " +
                                                 std::to_string(b.size()) + ")");
  }
  if (a.size() > 1000000) {
    throw_error(ErrorCode::kInvalidArgument, "adjusted Rand index supports at most 1e6 entities");
  }
  int ga = 0, gb = 0;
  const std::vector<int> ia = dense_ids(a, &ga);
  const std::vector<int> ib = dense_ids(b, &gb);

  std::map<std::pair<int, int>, std::int64_t> table;
  std::vector<std::int64_t> rows(static_cast<std::size_t>(ga), 0);
  std::vector<std::int64_t> cols(static_cast<std::size_t>(gb), 0);
  for (std::size_t i = 0; i < ia.size(); ++i) {
    ++table[{ia[i], ib[i]}];
    ++rows[static_cast<std::size_t>(ia[i])];
    ++cols[static_cast<std::size_t>(ib[i])];
  }
  Wide index = 0, sum_a = 0, sum_b = 0;
  for (const auto& [cell, count] : table) index += choose2(count);
  for (std::int64_t r : rows) sum_a += choose2(r);
  for (std::int64_t c : cols) sum_b += choose2(c);
  const Wide pairs = choose2(static_cast<std::int64_t>(a.size()));

  // ARI = (index - A B / N) / ((A + B) / 2 - A B / N), scaled by 2N.
  const Wide numer = 2 * pairs * index - 2 * sum_a * sum_b;
  const Wide denom = pairs * (sum_a + sum_b) - 2 * sum_a * sum_b;
  if (denom == 0) return 1.0;
  return static_cast<double>(static_cast<long double>(numer) / static_cast<long double>(denom));
}

double adjusted_rand_index(const Partition& a, const Partition& b) {
  if (a.entities.size() != a.cluster_of.size() || b.entities.size() != b.cluster_of.size()) {
    throw_error(ErrorCode::kInvalidArgument, "partition labels and cluster ids are misaligned");
  }
  std::unordered_map<std::string, int> lookup;
  for (std::size_t i = 0; i < b.entities.size(); ++i) {
    if (!lookup.emplace(b.entities[i], b.cluster_of[i]).second) {
      throw_error(ErrorCode::kValidation, "entity '" + b.entities[i] + "' appears twice");
    }
  }
  const std::set<std::string> left(a.entities.begin(), a.entities.end());
  const std::set<std::string> right(b.entities.begin(), b.entities.end());
  if (left.size() != a.entities.size()) {
    throw_error(ErrorCode::kValidation, "a partition lists an entity twice");
  }
  if (left != right) {
    std::vector<std::string> diff;
    std::set_symmetric_difference(left.begin(), left.end(), right.begin(), right.end(),
                                  std::back_inserter(diff));
    std::string listed;
    for (const auto& e : diff) listed += (listed.empty() ? "" : ", ") + e;
    throw_error(ErrorCode::kValidation, "partitions cover different entities: " + listed);
  }
  std::vector<int> aligned;
  aligned.reserve(a.entities.size());
  for (const auto& e : a.entities) aligned.push_back(lookup.at(e));
  return adjusted_rand_index(a.cluster_of, aligned);
}

}  // namespace nmfclust
