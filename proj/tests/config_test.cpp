// Copyright 2026 The ALGAS2 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "algas2/config.hpp"
#include "algas2/error.hpp"

namespace algas2::config {
namespace {

const std::string kSourceDir = ALGAS2_SOURCE_DIR;

// Expects a kConfig error whose message mentions `needle`.
template <typename Fn>
void ExpectConfigError(Fn &&fn, const std::string &needle) {
  try {
    fn();
    ADD_FAILURE() << "no error, expected one mentioning " << needle;
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig) << e.what();
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos)
        << e.what();
  }
}

TEST(RunConfigTest, ShippedDefaultLoads) {
  const RunConfig rc = LoadRunConfig(kSourceDir + "/config/default.json");
  EXPECT_EQ(rc.landing.engine, fls::DefaultEngineConfig());
  EXPECT_TRUE(std::filesystem::exists(rc.verify.golden_path));
  EXPECT_EQ(rc.landing.seed, 1u);
  EXPECT_EQ(rc.bench.cores, 4);
  EXPECT_DOUBLE_EQ(rc.bench.clock_mhz, 279.25);
  EXPECT_EQ(rc.landing.hub_ticks_per_step, 4);
  EXPECT_DOUBLE_EQ(rc.landing.scenario.v_max, 0.5);
}

TEST(RunConfigTest, EmptyDocumentGivesDefaults) {
  const RunConfig rc = ParseRunConfig("{}", ".");
  EXPECT_EQ(rc.landing.engine, fls::DefaultEngineConfig());
  EXPECT_TRUE(rc.verify.golden_path.empty());
}

TEST(RunConfigTest, StrictKeys) {
  ExpectConfigError([] { ParseRunConfig(R"({"sede": 3})", "."); }, "sede");
  ExpectConfigError(
      [] { ParseRunConfig(R"({"fusion": {"agreement": 3}})", "."); },
      "agreement");
  ExpectConfigError(
      [] { ParseRunConfig(R"({"scenario": {"dt_s": "fast"}})", "."); },
      "dt_s");
  ExpectConfigError([] { ParseRunConfig("{not json", "."); }, "");
  ExpectConfigError([] { ParseRunConfig("[1, 2]", "."); }, "");
}

TEST(RunConfigTest, SemanticValidation) {
  ExpectConfigError(
      [] { ParseRunConfig(R"({"sensors": {"lidar_dropout": 1.5}})", "."); },
      "dropout");
  ExpectConfigError(
      [] { ParseRunConfig(R"({"faults": [{"target": "core", "id": 7}]})", "."); },
      "");
  ExpectConfigError(
      [] { ParseRunConfig(R"({"faults": [{"target": "wing"}]})", "."); },
      "target");
  EXPECT_THROW(ParseRunConfig(R"({"bench": {"schedule": {"max_rules": 4}}})",
                              "."),
               Error);
}

TEST(RunConfigTest, InlineEngineAndRelativePaths) {
  const std::string dir = ::testing::TempDir() + "/algas2_cfg";
  std::filesystem::create_directories(dir + "/sub");
  fls::FlsEngineConfig e = fls::DefaultEngineConfig();
  e.consequents[4] = 101;
  StoreEngineConfig(dir + "/sub/engine.json", e);
  std::ofstream(dir + "/run.json")
      << R"({"engine": {"file": "sub/engine.json"},
             "verify": {"golden": "sub/g.csv"}})";
  const RunConfig rc = LoadRunConfig(dir + "/run.json");
  EXPECT_EQ(rc.landing.engine, e);
  EXPECT_EQ(std::filesystem::path(rc.verify.golden_path),
            std::filesystem::path(dir) / "sub/g.csv");

  const std::string inline_doc =
      std::string(R"({"engine": )") + EngineToJson(e) + "}";
  EXPECT_EQ(ParseRunConfig(inline_doc, ".").landing.engine, e);

  try {
    ParseRunConfig(R"({"engine": {"file": "nope.json"}})", dir);
    ADD_FAILURE();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("nope.json"), std::string::npos);
  }
}

TEST(RunConfigTest, JsonRoundTrip) {
  RunConfig rc = LoadRunConfig(kSourceDir + "/config/default.json");
  ApplyParameter(rc, "terrain_roll_deg", 3.5);
  ApplyParameter(rc, "noise_mm", 12);
  const std::string text = RunConfigToJson(rc);
  EXPECT_EQ(RunConfigToJson(ParseRunConfig(text, "/")), text);
}

TEST(SweepParameterTest, SetsKnobs) {
  RunConfig rc;
  ApplyParameter(rc, "inclination_deg", 10);
  EXPECT_NEAR(rc.landing.terrain.pitch_rad, 10 * M_PI / 180, 1e-15);
  ApplyParameter(rc, "seed", 42);
  EXPECT_EQ(rc.landing.seed, 42u);
  ApplyParameter(rc, "dropout", 0.25);
  EXPECT_EQ(rc.landing.sensors.lidar_dropout, 0.25);
  EXPECT_EQ(rc.landing.sensors.radar_dropout, 0.25);
  ApplyParameter(rc, "initial_altitude_m", 4);
  EXPECT_EQ(rc.landing.scenario.initial.altitude_m, 4.0);
  for (const std::string &name : SweepParameters()) {
    if (name == "fault_start_step") continue;
    RunConfig copy;
    EXPECT_NO_THROW(ApplyParameter(copy, name, 1.0)) << name;
  }
}

TEST(SweepParameterTest, FaultStartShiftsWindows) {
  RunConfig rc = ParseRunConfig(
      R"({"faults": [{"target": "core", "id": 2, "start_step": 10,
                      "end_step": 30}]})",
      ".");
  ApplyParameter(rc, "fault_start_step", 100);
  ASSERT_EQ(rc.landing.faults.faults.size(), 1u);
  EXPECT_EQ(rc.landing.faults.faults[0].start_step, 100u);
  EXPECT_EQ(rc.landing.faults.faults[0].end_step, 120u);

  RunConfig none;
  ExpectConfigError([&] { ApplyParameter(none, "fault_start_step", 5); },
                    "faults");
}

TEST(SweepParameterTest, Rejections) {
  RunConfig rc;
  ExpectConfigError([&] { ApplyParameter(rc, "wind", 1); }, "wind");
  ExpectConfigError([&] { ApplyParameter(rc, "seed", -1); }, "seed");
  ExpectConfigError([&] { ApplyParameter(rc, "noise_mm", NAN); }, "finite");
  ApplyParameter(rc, "dropout", 3.0);
  EXPECT_THROW(Validate(rc), Error);
}

}  // namespace
}  // namespace algas2::config
