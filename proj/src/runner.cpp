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

#include "nmfclust/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nmfclust/compare.hpp"
#include "nmfclust/csv.hpp"
#include "nmfclust/error.hpp"
#include "nmfclust/output.hpp"
#include "nmfclust/temporal_scan.hpp"
#include "nmfclust/version.hpp"

namespace nmfclust {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void bad_option(std::string_view key, std::string_view value,
                             std::string_view expected) {
  throw_error(ErrorCode::kInvalidArgument, "invalid value '" + std::string(value) + "' for " +
                                               std::string(key) + " (expected " +
                                               std::string(expected) + ")");
}

long long parse_integer(std::string_view key, std::string_view value, long long min) {
  const auto v = csv::parse_int(value);
  if (!v || *v < min) {
    bad_option(key, value, "an integer >= " + std::to_string(min));
  }
  return *v;
}

double parse_positive(std::string_view key, std::string_view value) {
  const auto v = csv::parse_double(value);
  if (!v || !(*v > 0.0)) bad_option(key, value, "a positive number");
  return *v;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_option(key, value, "true or false");
}

json optional_date(const std::optional<Date>& d) { return d ? json(d->iso()) : json(nullptr); }

std::optional<Date> date_field(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return Date::parse(j.at(key).get<std::string>());
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

json double_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

}  // namespace

std::string_view mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::kSingle: return "single";
    case RunMode::kScan: return "scan";
    case RunMode::kCompare: return "compare";
  }
  return "single";
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  const auto dots = text.find("..");
  if (dots != std::string_view::npos) {
    const auto lo = csv::parse_int(text.substr(0, dots));
    const auto hi = csv::parse_int(text.substr(dots + 2));
    if (!lo || !hi || *lo > *hi || *hi - *lo > 100000) {
      bad_option("range", text, "a..b with a <= b");
    }
    for (auto v = *lo; v <= *hi; ++v) out.push_back(static_cast<int>(v));
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto piece = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    const auto v = csv::parse_int(piece);
    if (!v) bad_option("list", text, "a..b or a comma-separated list of integers");
    out.push_back(static_cast<int>(*v));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

void set_option(RunConfig& config, std::string_view key, std::string_view value) {
  PipelineConfig& p = config.pipeline;
  if (key == "mode") {
    if (value == "single") config.mode = RunMode::kSingle;
    else if (value == "scan") config.mode = RunMode::kScan;
    else if (value == "compare") config.mode = RunMode::kCompare;
    else bad_option(key, value, "single, scan or compare");
  } else if (key == "counts") {
    config.counts_path = value;
  } else if (key == "population") {
    config.population_path = value;
  } else if (key == "format") {
    if (value == "wide") config.ingest.format = CountsFormat::kWide;
    else if (value == "long") config.ingest.format = CountsFormat::kLong;
    else bad_option(key, value, "wide or long");
  } else if (key == "fill_gaps_zero") {
    config.ingest.fill_gaps_zero = parse_bool(key, value);
  } else if (key == "start") {
    config.start = Date::parse(value);
  } else if (key == "end") {
    config.end = Date::parse(value);
  } else if (key == "first_end") {
    config.first_end = Date::parse(value);
  } else if (key == "compare_start") {
    config.compare_start = Date::parse(value);
  } else if (key == "compare_end") {
    config.compare_end = Date::parse(value);
  } else if (key == "ranks") {
    p.rank_candidates = parse_int_list(value);
  } else if (key == "folds") {
    p.folds = static_cast<int>(parse_integer(key, value, 2));
  } else if (key == "cv_repeats") {
    p.cv_repeats = static_cast<int>(parse_integer(key, value, 1));
  } else if (key == "restarts") {
    p.restarts = static_cast<int>(parse_integer(key, value, 1));
  } else if (key == "g_range") {
    p.g_candidates = parse_int_list(value);
  } else if (key == "clusters") {
    if (value.empty() || value == "auto") p.clusters.reset();
    else p.clusters = static_cast<int>(parse_integer(key, value, 1));
  } else if (key == "seed") {
    p.seed = static_cast<std::uint64_t>(parse_integer(key, value, 0));
  } else if (key == "threads") {
    p.threads = static_cast<int>(parse_integer(key, value, 1));
  } else if (key == "max_iterations") {
    p.solver.max_iterations = static_cast<int>(parse_integer(key, value, 1));
  } else if (key == "tolerance") {
    p.solver.tolerance = parse_positive(key, value);
  } else if (key == "stationarity_window") {
    p.solver.stationarity_window = static_cast<int>(parse_integer(key, value, 1));
  } else if (key == "epsilon_guard") {
    p.solver.epsilon_guard = parse_positive(key, value);
  } else if (key == "ari_flag_abs") {
    config.ari_flag_abs = parse_positive(key, value);
  } else if (key == "ari_flag_drop") {
    config.ari_flag_drop = parse_positive(key, value);
  } else if (key == "diagnostics") {
    config.diagnostics = parse_bool(key, value);
  } else {
    throw_error(ErrorCode::kInvalidArgument, "unknown option '" + std::string(key) + "'");
  }
}

void RunConfig::validate() const {
  if (counts_path.empty()) throw_error(ErrorCode::kInvalidArgument, "no counts file given");
  if (population_path.empty()) {
    throw_error(ErrorCode::kInvalidArgument, "no population file given");
  }
  if (mode == RunMode::kCompare && !compare_end) {
    throw_error(ErrorCode::kInvalidArgument, "compare mode needs the second window's end date");
  }
  if (start && end && *end < *start) {
    throw_error(ErrorCode::kInvalidArgument, "end date precedes start date");
  }
  pipeline.validate();
}

std::string manifest_json(const RunConfig& config, bool with_input_hashes) {
  const PipelineConfig& p = config.pipeline;
  json inputs{{"counts", config.counts_path},
              {"counts_format", config.ingest.format == CountsFormat::kWide ? "wide" : "long"},
              {"population", config.population_path},
              {"fill_gaps_zero", config.ingest.fill_gaps_zero}};
  if (with_input_hashes) {
    inputs["counts_fnv1a64"] = output::hex64(output::fnv1a64_file(config.counts_path));
    inputs["population_fnv1a64"] = output::hex64(output::fnv1a64_file(config.population_path));
  }
  json m{
      {"tool", "nmfclust"},
      {"version", kVersion},
      {"mode", mode_name(config.mode)},
      {"inputs", inputs},
      {"dates",
       {{"start", optional_date(config.start)},
        {"end", optional_date(config.end)},
        {"first_end", optional_date(config.first_end)},
        {"compare_start", optional_date(config.compare_start)},
        {"compare_end", optional_date(config.compare_end)}}},
      {"pipeline",
       {{"ranks", p.rank_candidates},
        {"folds", p.folds},
        {"cv_repeats", p.cv_repeats},
        {"restarts", p.restarts},
        {"g_range", p.g_candidates},
        {"clusters", p.clusters ? json(*p.clusters) : json(nullptr)},
        {"seed", p.seed}}},
      {"solver",
       {{"max_iterations", p.solver.max_iterations},
        {"tolerance", p.solver.tolerance},
        {"stationarity_window", p.solver.stationarity_window},
        {"epsilon_guard", p.solver.epsilon_guard}}},
      {"scan", {{"ari_flag_abs", config.ari_flag_abs}, {"ari_flag_drop", config.ari_flag_drop}}},
      {"diagnostics", config.diagnostics},
  };
  return json_text(m);
}

RunConfig config_from_manifest(std::string_view json_text_in) {
  json m;
  try {
    m = json::parse(json_text_in);
  } catch (const json::exception& e) {
    throw_error(ErrorCode::kParse, std::string("manifest is not valid JSON: ") + e.what());
  }
  RunConfig c;
  try {
    set_option(c, "mode", m.at("mode").get<std::string>());
    const json& in = m.at("inputs");
    c.counts_path = in.at("counts").get<std::string>();
    c.population_path = in.at("population").get<std::string>();
    set_option(c, "format", in.at("counts_format").get<std::string>());
    c.ingest.fill_gaps_zero = in.at("fill_gaps_zero").get<bool>();
    const json& d = m.at("dates");
    c.start = date_field(d, "start");
    c.end = date_field(d, "end");
    c.first_end = date_field(d, "first_end");
    c.compare_start = date_field(d, "compare_start");
    c.compare_end = date_field(d, "compare_end");
    const json& p = m.at("pipeline");
    c.pipeline.rank_candidates = p.at("ranks").get<std::vector<int>>();
    c.pipeline.folds = p.at("folds").get<int>();
    c.pipeline.cv_repeats = p.at("cv_repeats").get<int>();
    c.pipeline.restarts = p.at("restarts").get<int>();
    c.pipeline.g_candidates = p.at("g_range").get<std::vector<int>>();
    if (!p.at("clusters").is_null()) c.pipeline.clusters = p.at("clusters").get<int>();
    c.pipeline.seed = p.at("seed").get<std::uint64_t>();
    const json& s = m.at("solver");
    c.pipeline.solver.max_iterations = s.at("max_iterations").get<int>();
    c.pipeline.solver.tolerance = s.at("tolerance").get<double>();
    c.pipeline.solver.stationarity_window = s.at("stationarity_window").get<int>();
    c.pipeline.solver.epsilon_guard = s.at("epsilon_guard").get<double>();
    c.ari_flag_abs = m.at("scan").at("ari_flag_abs").get<double>();
    c.ari_flag_drop = m.at("scan").at("ari_flag_drop").get<double>();
    c.diagnostics = m.at("diagnostics").get<bool>();

    for (const auto& [path_key, hash_key] :
         {std::pair{"counts", "counts_fnv1a64"}, std::pair{"population", "population_fnv1a64"}}) {
      if (!in.contains(hash_key)) continue;
      const std::string path = in.at(path_key).get<std::string>();
      const std::string expected = in.at(hash_key).get<std::string>();
      if (output::hex64(output::fnv1a64_file(path)) != expected) {
        throw_error(ErrorCode::kValidation, "input '" + path +
                                                "' differs from the one recorded in the manifest");
      }
    }
  } catch (const json::exception& e) {
    throw_error(ErrorCode::kParse, std::string("manifest is missing a field: ") + e.what());
  }
  return c;
}

RunConfig load_manifest(const std::string& path) { return config_from_manifest(read_text(path)); }

SeriesMatrix load_series(const RunConfig& config, IngestReport* ingest, PreprocessReport* prep) {
  const RawCounts raw = read_counts(config.counts_path, config.ingest, ingest);
  const PopulationTable pop = read_population(config.population_path);
  return preprocess(raw, pop, prep);
}

ValidationReport validate_inputs(const RunConfig& config) {
  ValidationReport report;
  std::ostringstream text;
  std::size_t warnings = 0;
  auto fatal = [&](const std::string& message) {
    report.fatal.push_back(message);
    text << "fatal: " << message << '\n';
  };

  RawCounts raw;
  IngestReport ingest;
  bool have_counts = false;
  IngestOptions lenient = config.ingest;
  lenient.fill_gaps_zero = true;
  try {
    raw = read_counts(config.counts_path, lenient, &ingest);
    have_counts = true;
  } catch (const Error& e) {
    fatal(std::string(error_code_name(e.code())) + ": " + e.what());
  }

  if (have_counts) {
    text << "entities: " << raw.entities.size() << '\n';
    text << "calendar: " << raw.dates.front().iso() << " .. " << raw.dates.back().iso() << " ("
         << raw.dates.size() << " days)\n";
    if (!ingest.gap_days.empty()) {
      const std::string message = std::to_string(ingest.gap_days.size()) +
                                  " calendar day(s) missing, first " +
                                  ingest.gap_days.front().iso();
      if (config.ingest.fill_gaps_zero) {
        text << "warning: " << message << " (filled with zeros)\n";
        warnings += ingest.gap_days.size();
      } else {
        fatal(message + " (use --fill-gaps-zero)");
      }
    }
    const std::size_t gap_cells = ingest.gap_days.size() * raw.entities.size();
    const std::size_t missing = ingest.missing_cells - gap_cells;
    if (missing > 0) {
      text << "warning: " << missing << " missing cell(s) treated as zero\n";
      warnings += missing;
    }
    if (ingest.negative_cells > 0) {
      text << "warning: " << ingest.negative_cells << " negative count cell(s) clamped to zero\n";
      warnings += ingest.negative_cells;
    }
    for (const EntityIngestStats& s : ingest.per_entity) {
      const std::size_t own_missing = s.missing_days - ingest.gap_days.size();
      if (own_missing > 0 || s.negative_cells > 0) {
        text << "  " << s.entity << ": missing " << own_missing << ", negative "
             << s.negative_cells << '\n';
      }
    }
  }

  try {
    const PopulationTable pop = read_population(config.population_path);
    if (have_counts) {
      for (const std::string& e : raw.entities) {
        const auto it = pop.population.find(e);
        if (it == pop.population.end()) {
          fatal("entity '" + e + "' is missing from the population table");
        } else if (it->second <= 0) {
          fatal("entity '" + e + "' has nonpositive population " + std::to_string(it->second));
        }
      }
    }
  } catch (const Error& e) {
    fatal(std::string(error_code_name(e.code())) + ": " + e.what());
  }

  report.issues = report.fatal.size() + warnings;
  text << report.issues << " issues\n";
  report.text = text.str();
  return report;
}

// ---------------------------------------------------------------------------
// Runs

namespace {

struct PendingFile {
  std::string name;
  std::string content;
};

json rank_table(const RankSelection& ranks) {
  json table = json::array();
  for (const RankScore& s : ranks.scores) {
    table.push_back({{"rank", s.rank}, {"mspe", s.mspe}, {"nonconverged_fits", s.nonconverged_fits}});
  }
  return table;
}

json elbow_table(const ElbowScan& elbow) {
  json table = json::array();
  for (std::size_t k = 0; k < elbow.curve.g_values.size(); ++k) {
    table.push_back({{"g", elbow.curve.g_values[k]}, {"wss", elbow.curve.wss_values[k]}});
  }
  return table;
}

json assignment_table(const std::vector<std::string>& entities, const std::vector<int>& ids) {
  json table = json::array();
  for (std::size_t i = 0; i < entities.size(); ++i) {
    table.push_back({{"entity", entities[i]}, {"cluster", ids[i]}});
  }
  return table;
}

json window_json(const WindowResult& w, const std::vector<std::string>& entities,
                 const std::optional<std::string>& mspe_file) {
  json j{{"label", w.label},
         {"start", w.start.iso()},
         {"end", w.end.iso()},
         {"days", w.columns},
         {"ok", w.ok}};
  if (!w.ok) {
    j["error"] = w.error;
    return j;
  }
  const PipelineResult& r = w.result;
  j["r"] = r.rank;
  j["g"] = r.g;
  j["g_suggested"] = r.elbow.suggested ? json(*r.elbow.suggested) : json(nullptr);
  j["g_overridden"] = r.g_overridden;
  j["wss"] = r.clusters.wss;
  j["nmf_cost"] = r.fit.final_cost();
  j["nmf_iterations"] = r.fit.iterations;
  j["nmf_converged"] = r.fit.converged;
  j["assignments"] = assignment_table(entities, r.clusters.assignments);
  j["rank_mspe"] = rank_table(r.ranks);
  j["mspe_table"] = mspe_file ? json(*mspe_file) : json(nullptr);
  j["elbow"] = elbow_table(r.elbow);
  return j;
}

std::string elbow_summary(const PipelineResult& r) {
  std::ostringstream s;
  s << "rank r = " << r.rank << " (MSPE by rank:";
  for (const RankScore& score : r.ranks.scores) {
    s << ' ' << score.rank << '=' << csv::format_double(score.mspe);
  }
  s << ")\nelbow curve (g, wss):\n";
  for (std::size_t k = 0; k < r.elbow.curve.g_values.size(); ++k) {
    s << "  " << r.elbow.curve.g_values[k] << "  " << csv::format_double(r.elbow.curve.wss_values[k])
      << '\n';
  }
  s << "suggested g = " << (r.elbow.suggested ? std::to_string(*r.elbow.suggested) : "none")
    << ", used g = " << r.g << (r.g_overridden ? " (override)" : "") << '\n';
  return s.str();
}

Date default_scan_end(const Date& first_end, const Date& last_day) {
  return first_end + 7 * ((last_day - first_end) / 7);
}

RunOutcome commit(const std::string& out_dir, std::vector<PendingFile> files, std::string summary) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw_error(ErrorCode::kIo, "cannot create output directory '" + out_dir + "'");
  RunOutcome outcome;
  for (const PendingFile& f : files) {
    const fs::path target = fs::path(out_dir) / f.name;
    fs::create_directories(target.parent_path(), ec);
    output::write_file_atomic(target.string(), f.content);
    outcome.files.push_back(f.name);
  }
  outcome.summary = std::move(summary);
  return outcome;
}

}  // namespace

RunOutcome run(const RunConfig& config_in, const std::string& out_dir) {
  config_in.validate();
  const SeriesMatrix series = load_series(config_in);

  RunConfig config = config_in;
  if (!config.start) config.start = series.dates.front();
  std::vector<PendingFile> files;
  std::ostringstream summary;

  switch (config.mode) {
    case RunMode::kSingle: {
      if (!config.end) config.end = series.dates.back();
      const WindowResult w = run_window(series, "T", *config.start, *config.end, config.pipeline);
      if (!w.ok) throw_error(ErrorCode::kInvalidArgument, "pipeline failed: " + w.error);
      const PipelineResult& r = w.result;
      const SeriesMatrix slice = series.slice(*config.start, *config.end);
      files.push_back({"assignments.csv", output::assignments_csv(series.entities,
                                                                  r.clusters.assignments)});
      files.push_back({"W.csv", output::coefficients_csv(series.entities, r.fit.W)});
      files.push_back({"H.csv", output::bases_csv(slice.dates, r.fit.H)});
      files.push_back({"cost_trace.csv", output::cost_trace_csv(r.fit)});
      files.push_back({"elbow.csv", output::elbow_csv(r.elbow.curve)});
      files.push_back({"mspe.csv", output::mspe_csv(r.ranks)});
      files.push_back({"summary.json", json_text(window_json(w, series.entities, "mspe.csv"))});
      summary << "window " << w.start.iso() << " .. " << w.end.iso() << " (" << w.columns
              << " days, " << series.rows() << " entities)\n"
              << elbow_summary(r);
      break;
    }
    case RunMode::kScan: {
      if (!config.first_end) config.first_end = *config.start + 6;
      if (!config.end) config.end = default_scan_end(*config.first_end, series.dates.back());
      const WindowSpec spec = build_windows(series, *config.start, *config.first_end, *config.end);
      ScanConfig sc{config.pipeline, config.ari_flag_abs, config.ari_flag_drop};
      const ScanResult result = scan(series, spec, sc);

      json windows = json::array();
      for (const WindowResult& w : result.per_window) {
        std::optional<std::string> mspe_file;
        if (config.diagnostics && w.ok) {
          mspe_file = "windows/" + w.label + "_mspe.csv";
          files.push_back({*mspe_file, output::mspe_csv(w.result.ranks)});
          files.push_back({"windows/" + w.label + "_elbow.csv",
                           output::elbow_csv(w.result.elbow.curve)});
          files.push_back({"windows/" + w.label + "_assignments.csv",
                           output::assignments_csv(series.entities, w.result.clusters.assignments)});
        }
        windows.push_back(window_json(w, series.entities, mspe_file));
        summary << w.label << ' ' << w.start.iso() << " .. " << w.end.iso() << ": ";
        if (w.ok) {
          summary << "r=" << w.result.rank << " g=" << w.result.g << '\n';
        } else {
          summary << "failed (" << w.error << ")\n";
        }
      }
      json pairs = json::array();
      json ari = json::array();
      for (std::size_t k = 0; k < result.ari_series.size(); ++k) {
        pairs.push_back(spec.labels[k] + "-" + spec.labels[k + 1]);
        ari.push_back(double_or_null(result.ari_series[k]));
        summary << "ARI " << spec.labels[k] << '-' << spec.labels[k + 1] << " = "
                << csv::format_double(result.ari_series[k]) << '\n';
      }
      json doc{{"start", config.start->iso()},
               {"windows", windows},
               {"ari_pairs", pairs},
               {"ari_series", ari},
               {"flags", result.flagged_windows},
               {"flag_rule", {{"ari_below", config.ari_flag_abs}, {"drop_above", config.ari_flag_drop}}}};
      files.push_back({"scan.json", json_text(doc)});
      files.push_back({"ari.csv", output::ari_csv(spec.labels, result.ari_series)});
      summary << "flagged windows:";
      for (const auto& f : result.flagged_windows) summary << ' ' << f;
      summary << (result.flagged_windows.empty() ? " none\n" : "\n");
      break;
    }
    case RunMode::kCompare: {
      if (!config.end) config.end = series.dates.back();
      if (!config.compare_start) config.compare_start = config.start;
      const PeriodComparison cmp = compare_periods(series, *config.start, *config.end,
                                                   *config.compare_start, *config.compare_end,
                                                   config.pipeline);
      json doc{{"window_a", window_json(cmp.a, series.entities, std::nullopt)},
               {"window_b", window_json(cmp.b, series.entities, std::nullopt)},
               {"ari", cmp.ari}};
      files.push_back({"compare.json", json_text(doc)});
      files.push_back({"assignments_a.csv",
                       output::assignments_csv(series.entities, cmp.a.result.clusters.assignments)});
      files.push_back({"assignments_b.csv",
                       output::assignments_csv(series.entities, cmp.b.result.clusters.assignments)});
      summary << "A " << cmp.a.start.iso() << " .. " << cmp.a.end.iso() << ": r=" << cmp.a.result.rank
              << " g=" << cmp.a.result.g << '\n'
              << "B " << cmp.b.start.iso() << " .. " << cmp.b.end.iso() << ": r=" << cmp.b.result.rank
              << " g=" << cmp.b.result.g << '\n'
              << "ARI(A, B) = " << csv::format_double(cmp.ari) << '\n';
      break;
    }
  }
  files.push_back({"manifest.json", manifest_json(config, true)});
  return commit(out_dir, std::move(files), summary.str());
}

}  // namespace nmfclust
