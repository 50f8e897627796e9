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
#include <random>
#include <sstream>
#include <string>

#include "algas2/error.hpp"
#include "algas2/scenario.hpp"

namespace algas2::scenario {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDeg = kPi / 180.0;

CommandSet Commands(std::array<int, 4> codes, std::array<int, 4> trims = {}) {
  CommandSet set;
  for (int c = 0; c < 4; ++c) {
    core::CoreCommand cmd;
    cmd.descent_code = static_cast<uint8_t>(codes[c]);
    cmd.thrust_trim = trims[c];
    cmd.source_core = static_cast<uint8_t>(c);
    set[c] = cmd;
  }
  return set;
}

TEST(DynamicsTest, HoverCodeHoldsVelocity) {
  const DynamicsParams p;
  EXPECT_NEAR(ThrustAccel(128, p), p.g, 1e-12);
  VehicleState s;
  s.v_z = -0.7;
  const VehicleState n = StepDynamics(s, Commands({128, 128, 128, 128}), p, 0.001);
  EXPECT_NEAR(n.v_z, -0.7, 1e-12);
  EXPECT_NEAR(n.altitude_m, s.altitude_m - 0.7 * 0.001, 1e-12);
}

TEST(DynamicsTest, ZeroThrustFallsAtG) {
  const DynamicsParams p;
  EXPECT_EQ(ThrustAccel(255, p), 0.0);
  EXPECT_EQ(ThrustAccel(0, p), p.a_max);
  EXPECT_EQ(ThrustAccel(300, p), 0.0);
  EXPECT_EQ(ThrustAccel(-5, p), p.a_max);
  VehicleState s;
  s.v_z = 0.0;
  const VehicleState n =
      StepDynamics(s, Commands({255, 255, 255, 255}), p, 0.001);
  EXPECT_NEAR(n.v_z, -p.g * 0.001, 1e-15);
}

TEST(DynamicsTest, MeanOverLiveCoresOnly) {
  const DynamicsParams p;
  CommandSet set = Commands({128, 128, 128, 0});
  set[3].reset();
  VehicleState s;
  EXPECT_NEAR(StepDynamics(s, set, p, 0.001).v_z, 0.0, 1e-12);
  CommandSet none;
  EXPECT_NEAR(StepDynamics(s, none, p, 0.001).v_z, -p.g * 0.001, 1e-15);
}

TEST(DynamicsTest, DiagonalTrimsCancel) {
  const DynamicsParams p;
  VehicleState s;
  const VehicleState n =
      StepDynamics(s, Commands({128, 128, 128, 128}, {40, -40, -40, 40}), p,
                   0.001);
  EXPECT_EQ(n.roll_rate, 0.0);
  EXPECT_EQ(n.pitch_rate, 0.0);
}

TEST(DynamicsTest, TrimLowersTheTrimmedSide) {
  const DynamicsParams p;
  VehicleState s;
  // Positive trim on both front corners pitches the nose down.
  VehicleState n =
      StepDynamics(s, Commands({128, 128, 128, 128}, {50, 50, 0, 0}), p, 0.001);
  EXPECT_LT(n.pitch_rate, 0.0);
  EXPECT_EQ(n.roll_rate, 0.0);
  // Positive trim on the left corners rolls left-side down.
  n = StepDynamics(s, Commands({128, 128, 128, 128}, {50, 0, 50, 0}), p, 0.001);
  EXPECT_LT(n.roll_rate, 0.0);
  EXPECT_EQ(n.pitch_rate, 0.0);
}

TEST(GeometryTest, LevelVehicleOverFlatTerrain) {
  VehicleState s;
  s.altitude_m = 3.0;
  const auto h = CornerHeights(s, {}, core::Geometry{});
  const auto r = BodyDownRanges(s, {}, core::Geometry{});
  for (int c = 0; c < 4; ++c) {
    EXPECT_NEAR(h[c], 3.0, 1e-12);
    EXPECT_NEAR(r[c], 3.0, 1e-12);
  }
  EXPECT_NEAR(InclinationError(s, {}), 0.0, 1e-12);
}

TEST(GeometryTest, PitchedVehicleRaisesTheNose) {
  VehicleState s;
  s.altitude_m = 2.0;
  s.pitch_rad = 0.1;
  const core::Geometry g{0.6, 0.4};
  const auto h = CornerHeights(s, {}, g);
  EXPECT_NEAR(h[core::kFrontLeft], 2.0 + 0.6 * std::sin(0.1), 1e-12);
  EXPECT_NEAR(h[core::kRearRight], 2.0 - 0.6 * std::sin(0.1), 1e-12);
  s.pitch_rad = 0.0;
  s.roll_rad = 0.1;
  const auto h2 = CornerHeights(s, {}, g);
  EXPECT_NEAR(h2[core::kFrontLeft], 2.0 + 0.4 * std::sin(0.1), 1e-12);
  EXPECT_NEAR(h2[core::kFrontRight], 2.0 - 0.4 * std::sin(0.1), 1e-12);
  EXPECT_NEAR(InclinationError(s, {}), 0.1, 1e-12);
}

TEST(GeometryTest, LevelVehicleOverSlope) {
  VehicleState s;
  s.altitude_m = 5.0;
  TerrainModel t;
  t.pitch_rad = 4.0 * kDeg;
  t.roll_rad = -2.0 * kDeg;
  t.elevation_m = 0.25;
  const core::Geometry g{0.5, 0.5};
  const auto h = CornerHeights(s, t, g);
  const auto r = BodyDownRanges(s, t, g);
  for (int c = 0; c < 4; ++c) {
    const double x = core::PitchSign(c) * 0.5, y = core::RollSign(c) * 0.5;
    const double expect = 5.0 - (0.25 + x * std::tan(t.pitch_rad) +
                                 y * std::tan(t.roll_rad));
    EXPECT_NEAR(h[c], expect, 1e-12);
    EXPECT_NEAR(r[c], expect, 1e-12);  // body-down is vertical here
  }
  // Unit normal (-tan p, -tan r, 1) against vertical.
  const double n = std::sqrt(1 + std::pow(std::tan(t.pitch_rad), 2) +
                             std::pow(std::tan(t.roll_rad), 2));
  EXPECT_NEAR(InclinationError(s, t), std::acos(1.0 / n), 1e-12);
}

TEST(GeometryTest, AlignedVehicleHasNoInclinationError) {
  VehicleState s;
  TerrainModel t;
  t.pitch_rad = 7.0 * kDeg;
  s.pitch_rad = 7.0 * kDeg;
  EXPECT_NEAR(InclinationError(s, t), 0.0, 1e-7);
  t.pitch_rad = 0;
  t.roll_rad = -6.0 * kDeg;
  s.pitch_rad = 0;
  s.roll_rad = -6.0 * kDeg;
  EXPECT_NEAR(InclinationError(s, t), 0.0, 1e-7);
}

TEST(SensorTest, NoiselessReadingsAreTrueRanges) {
  VehicleState s;
  s.altitude_m = 4.321;
  std::mt19937_64 rng(1);
  const auto out = SampleSensors(s, {}, SensorModel{}, core::Geometry{}, 7, rng);
  for (const auto &o : out) {
    EXPECT_EQ(o.lidar_mm, 4321u);
    EXPECT_EQ(o.radar_mm, 4321u);
    EXPECT_TRUE(o.lidar_valid && o.radar_valid);
    EXPECT_EQ(o.step, 7u);
  }
}

TEST(SensorTest, DropoutJamAndFixedDrawCount) {
  VehicleState s;
  s.altitude_m = 4.0;
  SensorModel m;
  m.radar_dropout = 1.0;
  m.jams.push_back({2, Sensor::kLidar, 0, 10, JamMode::kBias, 250.0});
  std::mt19937_64 a(3), b(3);
  const auto out = SampleSensors(s, {}, m, core::Geometry{}, 5, a);
  for (int c = 0; c < 4; ++c) EXPECT_FALSE(out[c].radar_valid);
  EXPECT_EQ(out[2].lidar_mm, 4250u);
  EXPECT_EQ(out[1].lidar_mm, 4000u);
  // Same draws with no jams or dropout configured.
  SampleSensors(s, {}, SensorModel{}, core::Geometry{}, 5, b);
  EXPECT_EQ(a(), b());
}

TEST(FaultTest, ActiveWindows) {
  FaultPlan plan;
  plan.faults.push_back({FaultTarget::kCore, 1, Sensor::kLidar, 10, 20,
                         FaultMode::kFailStop});
  plan.faults.push_back({FaultTarget::kSensor, 3, Sensor::kRadar, 5, 0,
                         FaultMode::kGarbage});
  plan.faults.push_back({FaultTarget::kHub, 0, Sensor::kLidar, 30, 31,
                         FaultMode::kFailStop});
  EXPECT_FALSE(ApplyFaults(plan, 4).any());
  ActiveFaults f = ApplyFaults(plan, 10);
  EXPECT_EQ(f.core[1], FaultMode::kFailStop);
  EXPECT_EQ(f.sensor[3][1], FaultMode::kGarbage);
  EXPECT_FALSE(f.sensor[3][0].has_value());
  EXPECT_FALSE(f.hub.has_value());
  f = ApplyFaults(plan, 20);
  EXPECT_FALSE(f.core[1].has_value());
  EXPECT_EQ(ApplyFaults(plan, 30).hub, FaultMode::kFailStop);
  EXPECT_FALSE(ApplyFaults(plan, 31).hub.has_value());
  EXPECT_TRUE(ApplyFaults(plan, 100000).any());
}

LandingConfig Nominal() {
  LandingConfig c;
  c.scenario.record_trace = true;
  return c;
}

TEST(LandingTest, NominalFlatLandingSucceeds) {
  const LandingRun run = RunLanding(Nominal());
  EXPECT_TRUE(run.report.touchdown);
  EXPECT_TRUE(run.report.success);
  EXPECT_FALSE(run.report.degraded);
  EXPECT_LE(run.report.touchdown_speed_mps, 0.5);
  EXPECT_LE(run.report.touchdown_inclination_error_rad, 3.0 * kDeg);
  EXPECT_EQ(run.trace.steps.size(), run.report.steps_elapsed);
}

TEST(LandingTest, ZeroAltitudeIsImmediateTouchdown) {
  LandingConfig c = Nominal();
  c.scenario.initial.altitude_m = 0.0;
  const LandingRun run = RunLanding(c);
  EXPECT_TRUE(run.report.touchdown);
  EXPECT_EQ(run.report.steps_elapsed, 0u);
  EXPECT_TRUE(run.report.success);
}

TEST(LandingTest, StepLimitWithoutTouchdownFails) {
  LandingConfig c = Nominal();
  c.scenario.max_steps = 100;
  const LandingRun run = RunLanding(c);
  EXPECT_FALSE(run.report.touchdown);
  EXPECT_FALSE(run.report.success);
  EXPECT_EQ(run.report.steps_elapsed, 100u);
}

TEST(LandingTest, SymmetricCommandsOnFlatNoiselessRun) {
  const LandingRun run = RunLanding(Nominal());
  for (const StepRow &row : run.trace.steps) {
    for (int c = 1; c < 4; ++c) {
      ASSERT_EQ(row.descent_code[c], row.descent_code[0]) << row.step;
    }
  }
}

TEST(LandingTest, VerticalSpeedEnergyBound) {
  LandingConfig c = Nominal();
  c.scenario.initial.v_z = -1.5;
  c.sensors.lidar_sigma_mm = 20;
  c.sensors.radar_sigma_mm = 40;
  const LandingRun run = RunLanding(c);
  for (const StepRow &row : run.trace.steps) {
    const double bound = 1.5 + (c.dynamics.g + c.dynamics.a_max) * row.time_s;
    EXPECT_LE(std::fabs(row.vehicle.v_z), bound);
  }
}

TEST(LandingTest, SingleCoreFailStopStaysWithinDegradedThresholds) {
  for (int core = 0; core < 4; ++core) {
    LandingConfig c = Nominal();
    c.faults.faults.push_back(
        {FaultTarget::kCore, core, Sensor::kLidar, 50, 0, FaultMode::kFailStop});
    const LandingRun run = RunLanding(c);
    EXPECT_TRUE(run.report.touchdown);
    EXPECT_TRUE(run.report.degraded);
    EXPECT_TRUE(run.report.success) << "core " << core;
    EXPECT_LE(run.report.touchdown_speed_mps, 1.0);
    EXPECT_LE(run.report.touchdown_inclination_error_rad, 5.0 * kDeg);
  }
}

TEST(LandingTest, LidarJamOnOneCorner) {
  LandingConfig clean = Nominal();
  clean.sensors.lidar_sigma_mm = 5;
  clean.sensors.radar_sigma_mm = 15;
  LandingConfig jammed = clean;
  jammed.sensors.jams.push_back(
      {1, Sensor::kLidar, 1000, 7000, JamMode::kGarbage, 0.0});
  const LandingRun a = RunLanding(clean);
  const LandingRun b = RunLanding(jammed);
  ASSERT_TRUE(b.report.touchdown);
  EXPECT_LT(std::fabs(a.report.touchdown_speed_mps - b.report.touchdown_speed_mps),
            0.5);
  int in_window = 0;
  for (const CoreRow &row : b.trace.cores) {
    if (row.core != 1 || row.step < 1000 || row.step >= 7000) continue;
    ASSERT_TRUE(row.siu.has_value());
    EXPECT_EQ(row.siu->health, core::Health::kLidarSuspect) << row.step;
    ++in_window;
  }
  EXPECT_EQ(in_window, 6000);
}

std::string Slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(LandingTest, DeterministicTraces) {
  LandingConfig c = Nominal();
  c.sensors.lidar_sigma_mm = 10;
  c.sensors.radar_sigma_mm = 30;
  c.sensors.lidar_dropout = 0.01;
  c.terrain.pitch_rad = 4 * kDeg;
  c.faults.faults.push_back(
      {FaultTarget::kSensor, 0, Sensor::kRadar, 300, 900, FaultMode::kGarbage});
  c.seed = 1234;
  const std::string base = ::testing::TempDir() + "/algas2_det";
  WriteTrace(RunLanding(c), base + "_a");
  WriteTrace(RunLanding(c), base + "_b");
  for (const char *f :
       {"trace.csv", "core_trace.csv", "hub_trace.csv", "report.csv"}) {
    const std::string a = Slurp(base + "_a/" + f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, Slurp(base + "_b/" + f)) << f;
  }
  c.seed = 1235;
  WriteTrace(RunLanding(c), base + "_c");
  EXPECT_NE(Slurp(base + "_a/trace.csv"), Slurp(base + "_c/trace.csv"));
}

TEST(LandingTest, ReportInvariant) {
  // success <=> touchdown and both thresholds met, over a spread of runs.
  for (double pitch_deg : {0.0, 6.0, 12.0}) {
    for (double v0 : {0.0, -2.0}) {
      LandingConfig c = Nominal();
      c.terrain.pitch_rad = pitch_deg * kDeg;
      c.scenario.initial.v_z = v0;
      c.scenario.record_trace = false;
      const LandingReport r = RunLanding(c).report;
      const double vmax = r.degraded ? c.scenario.v_max_degraded : c.scenario.v_max;
      const double tmax = (r.degraded ? c.scenario.theta_max_degraded_deg
                                      : c.scenario.theta_max_deg) *
                          kDeg;
      EXPECT_EQ(r.success, r.touchdown && r.touchdown_speed_mps <= vmax &&
                               r.touchdown_inclination_error_rad <= tmax);
    }
  }
}

TEST(LandingTest, InvalidConfigRejected) {
  LandingConfig c = Nominal();
  c.scenario.dt_s = 0.0;
  EXPECT_THROW(RunLanding(c), Error);
  c = Nominal();
  c.scenario.initial.altitude_m = std::nan("");
  EXPECT_THROW(RunLanding(c), Error);
}

TEST(LandingTest, CsvHeaderAndRow) {
  LandingReport r;
  r.touchdown = true;
  r.touchdown_speed_mps = 0.25;
  r.touchdown_inclination_error_rad = kPi / 180.0;
  r.steps_elapsed = 10;
  r.success = true;
  EXPECT_EQ(ReportCsvHeader(),
            "touchdown,touchdown_speed_mps,touchdown_inclination_error_deg,"
            "steps_elapsed,success,degraded");
  EXPECT_EQ(ReportCsvRow(r), "1,0.250000,1.000000,10,1,0");
}

}  // namespace
}  // namespace algas2::scenario
