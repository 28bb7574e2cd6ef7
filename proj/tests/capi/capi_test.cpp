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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

std::string temp_dir(const std::string& name) {
  const char* root = std::getenv("NMFCLUST_TEST_TMP");
  fs::path dir = fs::path(root != nullptr ? root : fs::temp_directory_path().string()) /
                 ("capi_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

struct Config {
  nmfc_config* ptr = nmfc_config_create();
  ~Config() { nmfc_config_destroy(ptr); }
};

std::string take(char* s) {
  std::string out = s != nullptr ? s : "";
  nmfc_string_free(s);
  return out;
}

// 6 entities, 21 days: three rising, three falling.
void write_inputs(const std::string& dir) {
  std::string counts = "entity";
  for (int d = 1; d <= 21; ++d) counts += ",2020-04-" + std::string(d < 10 ? "0" : "") + std::to_string(d);
  counts += "\n";
  std::string pop = "entity,population\n";
  for (int e = 0; e < 6; ++e) {
    const std::string name = "E" + std::to_string(e);
    counts += name;
    for (int d = 0; d < 21; ++d) {
      const int v = e < 3 ? 5 + 3 * d + e : 80 - 3 * d + e;
      counts += "," + std::to_string(v);
    }
    counts += "\n";
    pop += name + ",1000000\n";
  }
  write_text(dir + "/counts.csv", counts);
  write_text(dir + "/population.csv", pop);
}

TEST(CApi, VersionAndStatusNames) {
  EXPECT_NE(std::string(nmfc_version()), "");
  EXPECT_STREQ(nmfc_status_name(NMFC_OK), "OK");
  EXPECT_STREQ(nmfc_status_name(NMFC_E_VALIDATION), "E_VALIDATION");
  EXPECT_STREQ(nmfc_status_name(NMFC_E_SHAPE), "E_SHAPE");
}

TEST(CApi, ConfigRejectsBadOptions) {
  Config c;
  ASSERT_NE(c.ptr, nullptr);
  EXPECT_EQ(nmfc_config_set(c.ptr, "ranks", "2..5"), NMFC_OK);
  EXPECT_EQ(nmfc_config_set(c.ptr, "no_such_key", "1"), NMFC_E_INVALID_ARGUMENT);
  EXPECT_NE(std::string(nmfc_last_error()).find("no_such_key"), std::string::npos);
  EXPECT_EQ(nmfc_config_set(c.ptr, "folds", "zero"), NMFC_E_INVALID_ARGUMENT);
  EXPECT_EQ(nmfc_config_set(nullptr, "folds", "3"), NMFC_E_INVALID_ARGUMENT);
  EXPECT_EQ(nmfc_config_set(c.ptr, nullptr, "3"), NMFC_E_INVALID_ARGUMENT);
  char* json = nullptr;
  ASSERT_EQ(nmfc_config_to_json(c.ptr, &json), NMFC_OK);
  const std::string text = take(json);
  EXPECT_NE(text.find("\"ranks\""), std::string::npos);
}

TEST(CApi, WnmfOnCallerBuffers) {
  // Rank-1 outer product: NNDSVD is exact.
  const std::vector<double> x{1, 2, 3, 2, 4, 6};
  std::vector<double> w(2), h(3);
  double cost = -1.0;
  int iterations = -1;
  ASSERT_EQ(nmfc_wnmf(x.data(), nullptr, 2, 3, 1, nullptr, w.data(), h.data(), &cost, &iterations),
            NMFC_OK);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(w[i] * h[j], x[i * 3 + j], 1e-10);
  }
  EXPECT_LT(cost, 1e-18);
  EXPECT_GE(iterations, 1);

  // Masked entries do not contribute to the cost.
  const std::vector<double> v{1, 1, 1, 1, 1, 0};
  std::vector<double> xm = x;
  xm[5] = 1000.0;
  ASSERT_EQ(nmfc_wnmf(xm.data(), v.data(), 2, 3, 1, nullptr, w.data(), h.data(), &cost, nullptr),
            NMFC_OK);
  EXPECT_LT(cost, 1e-8);

  EXPECT_EQ(nmfc_wnmf(x.data(), nullptr, 2, 3, 3, nullptr, w.data(), h.data(), nullptr, nullptr),
            NMFC_E_INVALID_ARGUMENT);
  EXPECT_EQ(nmfc_wnmf(nullptr, nullptr, 2, 3, 1, nullptr, w.data(), h.data(), nullptr, nullptr),
            NMFC_E_INVALID_ARGUMENT);
  std::vector<double> neg = x;
  neg[0] = -1.0;
  EXPECT_NE(nmfc_wnmf(neg.data(), nullptr, 2, 3, 1, nullptr, w.data(), h.data(), nullptr, nullptr),
            NMFC_OK);
}

TEST(CApi, KmeansAndAri) {
  const std::vector<double> pts{0.0, 0.1, 10.0, 10.1};
  std::vector<int> clusters(4);
  double wss = -1.0;
  ASSERT_EQ(nmfc_kmeans(pts.data(), 4, 1, 2, 20, 1, clusters.data(), &wss), NMFC_OK);
  EXPECT_EQ(clusters, (std::vector<int>{1, 1, 2, 2}));
  EXPECT_NEAR(wss, 0.01, 1e-12);
  EXPECT_EQ(nmfc_kmeans(pts.data(), 4, 1, 5, 20, 1, clusters.data(), &wss),
            NMFC_E_INVALID_ARGUMENT);

  const std::vector<int> a{1, 1, 1, 2};
  const std::vector<int> b{1, 2, 2, 2};
  double ari = 0.0;
  ASSERT_EQ(nmfc_adjusted_rand_index(a.data(), b.data(), 4, &ari), NMFC_OK);
  EXPECT_NEAR(ari, -1.0 / 3.0, 1e-12);
  ASSERT_EQ(nmfc_adjusted_rand_index(a.data(), a.data(), 4, &ari), NMFC_OK);
  EXPECT_EQ(ari, 1.0);
  EXPECT_EQ(nmfc_adjusted_rand_index(a.data(), nullptr, 4, &ari), NMFC_E_INVALID_ARGUMENT);
}

TEST(CApi, SeriesLoad) {
  const std::string dir = temp_dir("series");
  write_inputs(dir);
  Config c;
  ASSERT_EQ(nmfc_config_set(c.ptr, "counts", (dir + "/counts.csv").c_str()), NMFC_OK);
  ASSERT_EQ(nmfc_config_set(c.ptr, "population", (dir + "/population.csv").c_str()), NMFC_OK);
  nmfc_series* s = nullptr;
  ASSERT_EQ(nmfc_series_load(c.ptr, &s), NMFC_OK) << nmfc_last_error();
  ASSERT_EQ(nmfc_series_entities(s), 6u);
  ASSERT_EQ(nmfc_series_days(s), 21u);
  EXPECT_STREQ(nmfc_series_entity(s, 4), "E4");
  EXPECT_EQ(nmfc_series_entity(s, 6), nullptr);
  char buf[11];
  ASSERT_EQ(nmfc_series_date(s, 20, buf, sizeof(buf)), NMFC_OK);
  EXPECT_STREQ(buf, "2020-04-21");
  EXPECT_EQ(nmfc_series_date(s, 0, buf, 5), NMFC_E_INVALID_ARGUMENT);
  std::vector<double> values(6 * 21);
  ASSERT_EQ(nmfc_series_values(s, values.data(), values.size()), NMFC_OK);
  // Population 1e6 leaves counts unchanged; day 1 averages days 1..4.
  EXPECT_NEAR(values[0], (5 + 8 + 11 + 14) / 4.0, 1e-12);
  EXPECT_NEAR(values[10], 5 + 3 * 10.0, 1e-12);
  EXPECT_EQ(nmfc_series_values(s, values.data(), 10), NMFC_E_INVALID_ARGUMENT);
  nmfc_series_destroy(s);
}

TEST(CApi, ValidateReportsMissingPopulation) {
  const std::string dir = temp_dir("validate");
  write_inputs(dir);
  write_text(dir + "/population.csv", "entity,population\nE0,1\nE1,1\nE2,1\nE3,1\nE4,1\n");
  Config c;
  nmfc_config_set(c.ptr, "counts", (dir + "/counts.csv").c_str());
  nmfc_config_set(c.ptr, "population", (dir + "/population.csv").c_str());
  char* report = nullptr;
  EXPECT_EQ(nmfc_validate(c.ptr, &report), NMFC_E_VALIDATION);
  const std::string text = take(report);
  EXPECT_NE(text.find("E5"), std::string::npos);
  EXPECT_NE(text.find("1 issues"), std::string::npos);
}

TEST(CApi, RunAndReplayFromManifest) {
  const std::string dir = temp_dir("run");
  write_inputs(dir);
  Config c;
  for (const auto& [k, v] : std::vector<std::pair<std::string, std::string>>{
           {"counts", dir + "/counts.csv"},
           {"population", dir + "/population.csv"},
           {"ranks", "2..3"},
           {"folds", "4"},
           {"restarts", "20"},
           {"g_range", "2..5"}}) {
    ASSERT_EQ(nmfc_config_set(c.ptr, k.c_str(), v.c_str()), NMFC_OK) << k;
  }
  char* summary = nullptr;
  ASSERT_EQ(nmfc_run(c.ptr, (dir + "/a").c_str(), &summary), NMFC_OK) << nmfc_last_error();
  EXPECT_FALSE(take(summary).empty());

  Config replay;
  ASSERT_EQ(nmfc_config_load_manifest(replay.ptr, (dir + "/a/manifest.json").c_str()), NMFC_OK);
  ASSERT_EQ(nmfc_run(replay.ptr, (dir + "/b").c_str(), nullptr), NMFC_OK);
  for (const char* f : {"assignments.csv", "W.csv", "H.csv", "mspe.csv", "manifest.json"}) {
    std::ifstream fa(dir + "/a/" + f), fb(dir + "/b/" + f);
    const std::string sa((std::istreambuf_iterator<char>(fa)), {});
    const std::string sb((std::istreambuf_iterator<char>(fb)), {});
    EXPECT_FALSE(sa.empty()) << f;
    EXPECT_EQ(sa, sb) << f;
  }

  EXPECT_EQ(nmfc_run(c.ptr, nullptr, nullptr), NMFC_E_INVALID_ARGUMENT);
  EXPECT_EQ(nmfc_config_load_manifest(replay.ptr, (dir + "/nope.json").c_str()), NMFC_E_IO);
}

}  // namespace
