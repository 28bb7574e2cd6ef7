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

#include "nmfclust/nmfclust.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "nmfclust/compare.hpp"
#include "nmfclust/error.hpp"
#include "nmfclust/kmeans.hpp"
#include "nmfclust/runner.hpp"
#include "nmfclust/version.hpp"
#include "nmfclust/wnmf.hpp"

struct nmfc_config {
  nmfclust::RunConfig config;
};

struct nmfc_series {
  nmfclust::SeriesMatrix series;
};

namespace {

thread_local std::string last_error;

nmfc_status to_status(nmfclust::ErrorCode code) {
  using nmfclust::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return NMFC_E_INVALID_ARGUMENT;
    case ErrorCode::kIo: return NMFC_E_IO;
    case ErrorCode::kParse: return NMFC_E_PARSE;
    case ErrorCode::kValidation: return NMFC_E_VALIDATION;
    case ErrorCode::kShapeMismatch: return NMFC_E_SHAPE;
    case ErrorCode::kInternal: return NMFC_E_INTERNAL;
  }
  return NMFC_E_INTERNAL;
}

nmfc_status fail(nmfc_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs body and converts exceptions into status codes.
template <class Body>
nmfc_status guarded(Body&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const nmfclust::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(NMFC_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(NMFC_E_INTERNAL, e.what());
  } catch (...) {
    return fail(NMFC_E_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nmfclust::Matrix from_row_major(const double* data, size_t rows, size_t cols) {
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      data, static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

void to_row_major(const nmfclust::Matrix& m, double* out) {
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      out, m.rows(), m.cols()) = m;
}

#define NMFC_REQUIRE(cond, what)                                   \
  do {                                                             \
    if (!(cond)) return fail(NMFC_E_INVALID_ARGUMENT, what);       \
  } while (0)

}  // namespace

extern "C" {

const char* nmfc_version(void) { return nmfclust::kVersion; }

const char* nmfc_status_name(nmfc_status status) {
  switch (status) {
    case NMFC_OK: return "OK";
    case NMFC_E_INVALID_ARGUMENT: return "E_INVALID_ARGUMENT";
    case NMFC_E_IO: return "E_IO";
    case NMFC_E_PARSE: return "E_PARSE";
    case NMFC_E_VALIDATION: return "E_VALIDATION";
    case NMFC_E_SHAPE: return "E_SHAPE";
    case NMFC_E_INTERNAL: return "E_INTERNAL";
  }
  return "E_INTERNAL";
}

const char* nmfc_last_error(void) { return last_error.c_str(); }

void nmfc_string_free(char* s) { std::free(s); }

nmfc_config* nmfc_config_create(void) { return new (std::nothrow) nmfc_config(); }

void nmfc_config_destroy(nmfc_config* config) { delete config; }

nmfc_status nmfc_config_set(nmfc_config* config, const char* key, const char* value) {
  NMFC_REQUIRE(config && key && value, "null argument to nmfc_config_set");
  return guarded([&] {
    nmfclust::set_option(config->config, key, value);
    return NMFC_OK;
  });
}

nmfc_status nmfc_config_load_manifest(nmfc_config* config, const char* path) {
  NMFC_REQUIRE(config && path, "null argument to nmfc_config_load_manifest");
  return guarded([&] {
    const int threads = config->config.pipeline.threads;
    config->config = nmfclust::load_manifest(path);
    config->config.pipeline.threads = threads;
    return NMFC_OK;
  });
}

nmfc_status nmfc_config_to_json(const nmfc_config* config, char** out_json) {
  NMFC_REQUIRE(config && out_json, "null argument to nmfc_config_to_json");
  return guarded([&] {
    *out_json = dup_string(nmfclust::manifest_json(config->config, false));
    return NMFC_OK;
  });
}

nmfc_status nmfc_validate(const nmfc_config* config, char** out_report) {
  NMFC_REQUIRE(config, "null config");
  return guarded([&] {
    const nmfclust::ValidationReport report = nmfclust::validate_inputs(config->config);
    if (out_report != nullptr) *out_report = dup_string(report.text);
    if (!report.fatal.empty()) return fail(NMFC_E_VALIDATION, report.fatal.front());
    return NMFC_OK;
  });
}

nmfc_status nmfc_run(const nmfc_config* config, const char* out_dir, char** out_summary) {
  NMFC_REQUIRE(config && out_dir, "null argument to nmfc_run");
  return guarded([&] {
    const nmfclust::RunOutcome outcome = nmfclust::run(config->config, out_dir);
    if (out_summary != nullptr) *out_summary = dup_string(outcome.summary);
    return NMFC_OK;
  });
}

nmfc_status nmfc_series_load(const nmfc_config* config, nmfc_series** out_series) {
  NMFC_REQUIRE(config && out_series, "null argument to nmfc_series_load");
  return guarded([&] {
    auto* s = new nmfc_series{nmfclust::load_series(config->config)};
    *out_series = s;
    return NMFC_OK;
  });
}

void nmfc_series_destroy(nmfc_series* series) { delete series; }

size_t nmfc_series_entities(const nmfc_series* series) {
  return series ? series->series.entities.size() : 0;
}

size_t nmfc_series_days(const nmfc_series* series) {
  return series ? series->series.dates.size() : 0;
}

const char* nmfc_series_entity(const nmfc_series* series, size_t index) {
  if (series == nullptr || index >= series->series.entities.size()) return nullptr;
  return series->series.entities[index].c_str();
}

nmfc_status nmfc_series_date(const nmfc_series* series, size_t day, char* buf, size_t buf_size) {
  NMFC_REQUIRE(series && buf, "null argument to nmfc_series_date");
  NMFC_REQUIRE(day < series->series.dates.size(), "day index out of range");
  const std::string iso = series->series.dates[day].iso();
  NMFC_REQUIRE(buf_size > iso.size(), "date buffer too small");
  std::memcpy(buf, iso.c_str(), iso.size() + 1);
  return NMFC_OK;
}

nmfc_status nmfc_series_values(const nmfc_series* series, double* out, size_t capacity) {
  NMFC_REQUIRE(series && out, "null argument to nmfc_series_values");
  const auto& v = series->series.values;
  NMFC_REQUIRE(capacity >= static_cast<size_t>(v.size()), "output buffer too small");
  to_row_major(v, out);
  return NMFC_OK;
}

nmfc_status nmfc_wnmf(const double* x, const double* v, size_t n, size_t m, size_t rank,
                      const nmfc_config* config, double* w_out, double* h_out, double* cost_out,
                      int* iterations_out) {
  NMFC_REQUIRE(x && w_out && h_out, "null argument to nmfc_wnmf");
  NMFC_REQUIRE(n > 0 && m > 0 && rank > 0, "empty problem");
  return guarded([&] {
    const nmfclust::Matrix X = from_row_major(x, n, m);
    const nmfclust::Matrix V =
        v ? from_row_major(v, n, m)
          : nmfclust::Matrix::Ones(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    const nmfclust::SolverConfig solver =
        config ? config->config.pipeline.solver : nmfclust::SolverConfig{};
    const auto fit = nmfclust::solve(
        X, V, nmfclust::nndsvd_init(X, static_cast<Eigen::Index>(rank)), solver);
    to_row_major(fit.W, w_out);
    to_row_major(fit.H, h_out);
    if (cost_out) *cost_out = fit.final_cost();
    if (iterations_out) *iterations_out = fit.iterations;
    return NMFC_OK;
  });
}

nmfc_status nmfc_kmeans(const double* points, size_t n, size_t d, int g, int restarts,
                        uint64_t seed, int* clusters_out, double* wss_out) {
  NMFC_REQUIRE(points && clusters_out, "null argument to nmfc_kmeans");
  NMFC_REQUIRE(n > 0 && d > 0, "empty point set");
  return guarded([&] {
    const auto result = nmfclust::kmeans_best_of(from_row_major(points, n, d), g, restarts, seed);
    std::memcpy(clusters_out, result.assignments.data(), n * sizeof(int));
    if (wss_out) *wss_out = result.wss;
    return NMFC_OK;
  });
}

nmfc_status nmfc_adjusted_rand_index(const int* a, const int* b, size_t n, double* out) {
  NMFC_REQUIRE(a && b && out, "null argument to nmfc_adjusted_rand_index");
  return guarded([&] {
    *out = nmfclust::adjusted_rand_index(std::span<const int>(a, n), std::span<const int>(b, n));
    return NMFC_OK;
  });
}

}  // extern "C"
