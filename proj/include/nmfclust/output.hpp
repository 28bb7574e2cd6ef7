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

#ifndef NMFCLUST_OUTPUT_HPP_
#define NMFCLUST_OUTPUT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "nmfclust/date.hpp"
#include "nmfclust/kmeans.hpp"
#include "nmfclust/rank_select.hpp"
#include "nmfclust/wnmf.hpp"

namespace nmfclust::output {

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partial file. Throws Error(kIo).
void write_file_atomic(const std::string& path, const std::string& content);

std::uint64_t fnv1a64_file(const std::string& path);
std::string hex64(std::uint64_t value);

std::string assignments_csv(const std::vector<std::string>& entities,
                            const std::vector<int>& assignments);
// "entity,basis_1,...,basis_r"
std::string coefficients_csv(const std::vector<std::string>& entities, const Matrix& W);
// "basis,<date>,<date>,..."
std::string bases_csv(const std::vector<Date>& dates, const Matrix& H);
std::string cost_trace_csv(const Factorization& fit);
std::string elbow_csv(const ElbowCurve& curve);
// "rank,fold,mspe"; folds numbered 1.. across repeats.
std::string mspe_csv(const RankSelection& selection);
// "window_pair,ari"
std::string ari_csv(const std::vector<std::string>& labels, const std::vector<double>& ari);

}  // namespace nmfclust::output

#endif  // NMFCLUST_OUTPUT_HPP_
