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

// Command-line front end. Links only the C API of libnmfclust.

#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "nmfclust/nmfclust.h"

namespace {

struct ConfigDeleter {
  void operator()(nmfc_config* c) const { nmfc_config_destroy(c); }
};
using ConfigPtr = std::unique_ptr<nmfc_config, ConfigDeleter>;

struct CString {
  char* ptr = nullptr;
  ~CString() { nmfc_string_free(ptr); }
};

int report_failure(nmfc_status status) {
  std::fprintf(stderr, "nmfclust: error %s: %s\n", nmfc_status_name(status), nmfc_last_error());
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cluster nonnegative time series with weighted NMF and k-means"};
  app.set_version_flag("--version", std::string(nmfc_version()));

  std::string mode = "single";
  std::string out_dir = "nmfclust_out";
  std::string manifest;
  // Options forwarded verbatim to nmfc_config_set, in flag order.
  std::vector<std::pair<std::string, std::string>> text_options = {
      {"counts", ""},          {"population", ""},    {"start", ""},
      {"end", ""},             {"first_end", ""},     {"compare_start", ""},
      {"compare_end", ""},     {"ranks", ""},         {"folds", ""},
      {"cv_repeats", ""},      {"restarts", ""},      {"g_range", ""},
      {"clusters", ""},        {"seed", ""},          {"ari_flag_abs", ""},
      {"ari_flag_drop", ""},   {"max_iterations", ""}, {"tolerance", ""},
      {"stationarity_window", ""}, {"threads", ""},
  };
  const std::vector<std::string> descriptions = {
      "Daily counts CSV (wide: entity,<dates>...; long: entity,date,count)",
      "Population CSV (entity,population)",
      "First day of the analysis window (YYYY-MM-DD)",
      "Last day of the window; in scan mode the last window end",
      "Scan mode: end of the first window (default start + 6)",
      "Compare mode: start of the second window (default --start)",
      "Compare mode: end of the second window",
      "NMF rank candidates, e.g. 2..12 or 2,4,6",
      "Cross-validation folds",
      "Cross-validation repetitions averaged per rank",
      "k-means random restarts",
      "Cluster-count candidates for the elbow, e.g. 2..10",
      "Fix the number of clusters instead of using the elbow suggestion",
      "Master random seed",
      "Flag a window when its ARI falls below this value ...",
      "... and dropped by more than this from the previous ARI",
      "WNMF iteration cap",
      "WNMF stationarity tolerance, relative to the starting cost",
      "WNMF stationarity window (iterations)",
      "Worker threads (results do not depend on it)",
  };
  for (std::size_t k = 0; k < text_options.size(); ++k) {
    std::string flag = "--" + text_options[k].first;
    for (char& c : flag) {
      if (c == '_') c = '-';
    }
    app.add_option(flag, text_options[k].second, descriptions[k]);
  }
  bool long_format = false;
  bool fill_gaps_zero = false;
  bool diagnostics = false;
  app.add_option("--mode", mode, "single | scan | compare | validate")
      ->check(CLI::IsMember({"single", "scan", "compare", "validate"}));
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--manifest", manifest,
                 "Replay a run manifest; explicit flags override its values");
  app.add_flag("--long-format", long_format, "Counts CSV is in long format (entity,date,count)");
  app.add_flag("--fill-gaps-zero", fill_gaps_zero, "Treat missing calendar days as zero counts");
  app.add_flag("--diagnostics", diagnostics, "Write per-window MSPE/elbow tables in scan mode");

  CLI11_PARSE(app, argc, argv);

  ConfigPtr config(nmfc_config_create());
  if (!config) {
    std::fprintf(stderr, "nmfclust: error E_INTERNAL: out of memory\n");
    return NMFC_E_INTERNAL;
  }
  if (!manifest.empty()) {
    if (nmfc_status s = nmfc_config_load_manifest(config.get(), manifest.c_str()); s != NMFC_OK) {
      return report_failure(s);
    }
  }

  std::vector<std::pair<std::string, std::string>> settings;
  if (app.count("--mode") > 0 && mode != "validate") settings.emplace_back("mode", mode);
  for (const auto& [key, value] : text_options) {
    std::string flag = "--" + key;
    for (char& c : flag) {
      if (c == '_') c = '-';
    }
    if (app.count(flag) > 0) settings.emplace_back(key, value);
  }
  if (long_format) settings.emplace_back("format", "long");
  if (fill_gaps_zero) settings.emplace_back("fill_gaps_zero", "true");
  if (diagnostics) settings.emplace_back("diagnostics", "true");
  for (const auto& [key, value] : settings) {
    if (nmfc_status s = nmfc_config_set(config.get(), key.c_str(), value.c_str()); s != NMFC_OK) {
      return report_failure(s);
    }
  }

  if (mode == "validate") {
    CString report;
    const nmfc_status s = nmfc_validate(config.get(), &report.ptr);
    if (report.ptr != nullptr) std::cout << report.ptr;
    return s == NMFC_OK ? 0 : report_failure(s);
  }

  CString summary;
  if (nmfc_status s = nmfc_run(config.get(), out_dir.c_str(), &summary.ptr); s != NMFC_OK) {
    return report_failure(s);
  }
  std::cout << summary.ptr << "outputs written to " << out_dir << '\n';
  return 0;
}
