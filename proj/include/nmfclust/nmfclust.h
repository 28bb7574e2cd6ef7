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

/*
 * C interface to nmfclust: weighted NMF + k-means clustering of nonnegative
 * time series, with nested-window change scans.
 *
 * Handles are opaque. Every fallible call returns an nmfc_status; on failure
 * a one-line description is available from nmfc_last_error() on the calling
 * thread until the next call. Strings returned through char** out-params are
 * owned by the caller and released with nmfc_string_free(). Matrices are
 * dense, row-major doubles.
 */
#ifndef NMFCLUST_NMFCLUST_H_
#define NMFCLUST_NMFCLUST_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NMFC_BUILDING_LIBRARY)
#    define NMFC_API __declspec(dllexport)
#  else
#    define NMFC_API __declspec(dllimport)
#  endif
#else
#  define NMFC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nmfc_status {
  NMFC_OK = 0,
  NMFC_E_INVALID_ARGUMENT = 1,
  NMFC_E_IO = 2,
  NMFC_E_PARSE = 3,
  NMFC_E_VALIDATION = 4,
  NMFC_E_SHAPE = 5,
  NMFC_E_INTERNAL = 6
} nmfc_status;

typedef struct nmfc_config nmfc_config;
typedef struct nmfc_series nmfc_series;

NMFC_API const char* nmfc_version(void);
/* Stable token such as "E_VALIDATION"; "OK" for NMFC_OK. */
NMFC_API const char* nmfc_status_name(nmfc_status status);
NMFC_API const char* nmfc_last_error(void);
NMFC_API void nmfc_string_free(char* s);

/* ---- run configuration ------------------------------------------------- */

NMFC_API nmfc_config* nmfc_config_create(void);
NMFC_API void nmfc_config_destroy(nmfc_config* config);

/*
 * Sets one option from text. Keys: mode (single|scan|compare), counts,
 * population, format (wide|long), fill_gaps_zero, start, end, first_end,
 * compare_start, compare_end, ranks ("2..12" or "2,4,6"), folds, cv_repeats,
 * restarts, g_range, clusters ("auto" clears), seed, threads, max_iterations,
 * tolerance, stationarity_window, epsilon_guard, ari_flag_abs,
 * ari_flag_drop, diagnostics.
 */
NMFC_API nmfc_status nmfc_config_set(nmfc_config* config, const char* key, const char* value);

/* Replaces the configuration with the one recorded in a run manifest. */
NMFC_API nmfc_status nmfc_config_load_manifest(nmfc_config* config, const char* path);

/* Manifest JSON for the configuration as it stands (no input hashes). */
NMFC_API nmfc_status nmfc_config_to_json(const nmfc_config* config, char** out_json);

/* ---- batch runs -------------------------------------------------------- */

/*
 * Checks the configured inputs. *out_report receives a multi-line report
 * ending in "<k> issues". Returns NMFC_E_VALIDATION when a fatal problem was
 * found (the report and nmfc_last_error() name it).
 */
NMFC_API nmfc_status nmfc_validate(const nmfc_config* config, char** out_report);

/*
 * Runs the configured mode and writes its artifacts into out_dir. If
 * out_summary is non-null it receives a human-readable summary.
 */
NMFC_API nmfc_status nmfc_run(const nmfc_config* config, const char* out_dir,
                              char** out_summary);

/* ---- preprocessed series ----------------------------------------------- */

/* Reads, cleans, scales to per-million and smooths the configured inputs. */
NMFC_API nmfc_status nmfc_series_load(const nmfc_config* config, nmfc_series** out_series);
NMFC_API void nmfc_series_destroy(nmfc_series* series);
NMFC_API size_t nmfc_series_entities(const nmfc_series* series);
NMFC_API size_t nmfc_series_days(const nmfc_series* series);
/* Borrowed pointer valid for the lifetime of the series; NULL if out of range. */
NMFC_API const char* nmfc_series_entity(const nmfc_series* series, size_t index);
/* Writes "YYYY-MM-DD" plus terminator into buf (at least 11 bytes). */
NMFC_API nmfc_status nmfc_series_date(const nmfc_series* series, size_t day, char* buf,
                                      size_t buf_size);
/* Copies entities x days values, row-major, into out (capacity in doubles). */
NMFC_API nmfc_status nmfc_series_values(const nmfc_series* series, double* out,
                                        size_t capacity);

/* ---- numerical kernels on caller buffers ------------------------------- */

/*
 * Weighted NMF of the n x m matrix x with mask v (NULL means all ones),
 * NNDSVD-initialized, solver knobs from config (NULL for defaults).
 * w_out: n x rank, h_out: rank x m. cost_out and iterations_out may be NULL.
 */
NMFC_API nmfc_status nmfc_wnmf(const double* x, const double* v, size_t n, size_t m,
                               size_t rank, const nmfc_config* config, double* w_out,
                               double* h_out, double* cost_out, int* iterations_out);

/* Best-of-restarts k-means on n points of dimension d; clusters_out gets 1..g. */
NMFC_API nmfc_status nmfc_kmeans(const double* points, size_t n, size_t d, int g, int restarts,
                                 uint64_t seed, int* clusters_out, double* wss_out);

NMFC_API nmfc_status nmfc_adjusted_rand_index(const int* a, const int* b, size_t n,
                                              double* out);

#ifdef __cplusplus
}
#endif

#endif /* NMFCLUST_NMFCLUST_H_ */
