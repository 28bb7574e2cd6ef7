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

#include "nmfclust/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nmfclust/csv.hpp"
#include "nmfclust/error.hpp"

namespace nmfclust::output {

namespace fs = std::filesystem;

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw_error(ErrorCode::kIo, "cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw_error(ErrorCode::kIo, "failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw_error(ErrorCode::kIo, "cannot move output into place at '" + path + "'");
  }
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorCode::kIo, "cannot open '" + path + "' for hashing");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 14];
  while (in) {
    in.read(buf, sizeof(buf));
    for (std::streamsize k = 0; k < in.gcount(); ++k) {
      h ^= static_cast<unsigned char>(buf[k]);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string assignments_csv(const std::vector<std::string>& entities,
                            const std::vector<int>& assignments) {
  std::ostringstream out;
  out << "entity,cluster\n";
  for (std::size_t i = 0; i < entities.size(); ++i) {
    out << csv::escape(entities[i]) << ',' << assignments[i] << '\n';
  }
  return out.str();
}

std::string coefficients_csv(const std::vector<std::string>& entities, const Matrix& W) {
  std::ostringstream out;
  out << "entity";
  for (Index k = 0; k < W.cols(); ++k) out << ",basis_" << (k + 1);
  out << '\n';
  for (Index i = 0; i < W.rows(); ++i) {
    out << csv::escape(entities[static_cast<std::size_t>(i)]);
    for (Index k = 0; k < W.cols(); ++k) out << ',' << csv::format_double(W(i, k));
    out << '\n';
  }
  return out.str();
}

std::string bases_csv(const std::vector<Date>& dates, const Matrix& H) {
  std::ostringstream out;
  out << "basis";
  for (const Date& d : dates) out << ',' << d.iso();
  out << '\n';
  for (Index k = 0; k < H.rows(); ++k) {
    out << (k + 1);
    for (Index j = 0; j < H.cols(); ++j) out << ',' << csv::format_double(H(k, j));
    out << '\n';
  }
  return out.str();
}

std::string cost_trace_csv(const Factorization& fit) {
  std::ostringstream out;
  out << "iteration,cost\n0," << csv::format_double(fit.initial_cost) << '\n';
  for (std::size_t t = 0; t < fit.cost_trace.size(); ++t) {
    out << (t + 1) << ',' << csv::format_double(fit.cost_trace[t]) << '\n';
  }
  return out.str();
}

std::string elbow_csv(const ElbowCurve& curve) {
  std::ostringstream out;
  out << "g,wss\n";
  for (std::size_t k = 0; k < curve.g_values.size(); ++k) {
    out << curve.g_values[k] << ',' << csv::format_double(curve.wss_values[k]) << '\n';
  }
  return out.str();
}

std::string mspe_csv(const RankSelection& selection) {
  std::ostringstream out;
  out << "rank,fold,mspe\n";
  for (const RankScore& score : selection.scores) {
    for (std::size_t k = 0; k < score.per_fold_mspe.size(); ++k) {
      out << score.rank << ',' << (k + 1) << ',' << csv::format_double(score.per_fold_mspe[k])
          << '\n';
    }
  }
  return out.str();
}

std::string ari_csv(const std::vector<std::string>& labels, const std::vector<double>& ari) {
  std::ostringstream out;
  out << "window_pair,ari\n";
  for (std::size_t k = 0; k < ari.size(); ++k) {
    out << labels[k] << '-' << labels[k + 1] << ','
        << (std::isnan(ari[k]) ? std::string("nan") : csv::format_double(ari[k])) << '\n';
  }
  return out.str();
}

}  // namespace nmfclust::output
