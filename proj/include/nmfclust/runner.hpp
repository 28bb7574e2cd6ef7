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

#ifndef NMFCLUST_RUNNER_HPP_
#define NMFCLUST_RUNNER_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nmfclust/date.hpp"
#include "nmfclust/pipeline.hpp"
#include "nmfclust/preprocess.hpp"

namespace nmfclust {

enum class RunMode { kSingle, kScan, kCompare };

// Every knob of a batch run. Everything except `threads` is recorded in the
// manifest; thread count never changes results.
struct RunConfig {
  RunMode mode = RunMode::kSingle;
  std::string counts_path;
  std::string population_path;
  IngestOptions ingest;

  std::optional<Date> start;          // defaults to the first data day
  std::optional<Date> end;            // defaults to the last (scan: last whole week)
  std::optional<Date> first_end;      // scan only, defaults to start + 6
  std::optional<Date> compare_start;  // compare only, defaults to start
  std::optional<Date> compare_end;    // compare only, required

  PipelineConfig pipeline;
  double ari_flag_abs = 0.5;
  double ari_flag_drop = 0.3;
  bool diagnostics = false;

  // Throws Error(kInvalidArgument) on a missing required field or a
  // nonpositive knob.
  void validate() const;
};

// Applies one textual option, e.g. ("ranks", "2..12") or ("seed", "7").
// Throws Error(kInvalidArgument) for unknown keys or malformed values.
void set_option(RunConfig& config, std::string_view key, std::string_view value);

// "a..b" or "a,b,c".
std::vector<int> parse_int_list(std::string_view text);

std::string_view mode_name(RunMode mode);

// The manifest of a run. With input hashes it pins the inputs as well.
std::string manifest_json(const RunConfig& config, bool with_input_hashes);

// Rebuilds a RunConfig from a manifest. When the manifest carries input
// hashes they are checked against the files on disk (Error(kValidation) on a
// mismatch).
RunConfig config_from_manifest(std::string_view json_text);
RunConfig load_manifest(const std::string& path);

struct ValidationReport {
  std::size_t issues = 0;
  std::vector<std::string> fatal;
  std::string text;
};

// Checks calendar continuity, the entity/population join and nonnegativity.
// Never throws for data problems; they land in the report.
ValidationReport validate_inputs(const RunConfig& config);

struct RunOutcome {
  std::vector<std::string> files;  // written, relative to out_dir
  std::string summary;             // human-readable, includes the elbow curve
};

// Dispatches on config.mode. All files are computed first and then written
// atomically into out_dir (created if missing).
RunOutcome run(const RunConfig& config, const std::string& out_dir);

// Loads and preprocesses the configured inputs.
SeriesMatrix load_series(const RunConfig& config, IngestReport* ingest = nullptr,
                         PreprocessReport* prep = nullptr);

}  // namespace nmfclust

#endif  // NMFCLUST_RUNNER_HPP_
