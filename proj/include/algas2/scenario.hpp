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

#ifndef ALGAS2_SCENARIO_HPP_
#define ALGAS2_SCENARIO_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "algas2/core.hpp"
#include "algas2/fls.hpp"
#include "algas2/interconnect.hpp"

namespace algas2::scenario {

using core::kNumCores;

// 3-DOF plant: heave, roll, pitch. Roll > 0 raises the left side, pitch > 0
// raises the nose.
struct VehicleState {
  double altitude_m = 10.0;  // CG height above the terrain reference
  double v_z = 0.0;          // m/s, positive up
  double roll_rad = 0.0;
  double pitch_rad = 0.0;
  double roll_rate = 0.0;
  double pitch_rate = 0.0;
};

// Plane z = elevation + X tan(pitch) + Y tan(roll); X forward, Y left.
struct TerrainModel {
  double roll_rad = 0.0;
  double pitch_rad = 0.0;
  double elevation_m = 0.0;
};

enum class Sensor { kLidar = 0, kRadar = 1 };
enum class JamMode { kBias, kGarbage };

// Active for steps in [start_step, end_step).
struct JamInterval {
  int corner = 0;
  Sensor sensor = Sensor::kLidar;
  uint64_t start_step = 0;
  uint64_t end_step = 0;
  JamMode mode = JamMode::kGarbage;
  double bias_mm = 0.0;
};

struct SensorModel {
  double lidar_sigma_mm = 0.0;
  double radar_sigma_mm = 0.0;
  double lidar_dropout = 0.0;  // per-step probability
  double radar_dropout = 0.0;
  double max_range_mm = 20470.0;
  std::vector<JamInterval> jams;
};

enum class FaultTarget { kCore, kSensor, kHub };
enum class FaultMode { kFailStop, kGarbage };

// Active for steps in [start_step, end_step); end_step 0 means never ends.
struct Fault {
  FaultTarget target = FaultTarget::kCore;
  int id = 0;                      // core id, or corner for sensor faults
  Sensor sensor = Sensor::kLidar;  // sensor faults only
  uint64_t start_step = 0;
  uint64_t end_step = 0;
  FaultMode mode = FaultMode::kFailStop;
};

struct FaultPlan {
  std::vector<Fault> faults;
};

struct ActiveFaults {
  std::array<std::optional<FaultMode>, kNumCores> core;
  std::array<std::array<std::optional<FaultMode>, 2>, kNumCores> sensor;
  std::optional<FaultMode> hub;

  bool any() const;
};

ActiveFaults ApplyFaults(const FaultPlan &plan, uint64_t step);

struct DynamicsParams {
  double g = 9.81;
  // Code 0 gives a_max, code 255 zero thrust; this default puts hover at
  // code 128 exactly.
  double a_max = 9.81 * 255.0 / 127.0;
  double k_att = 0.001;   // rad/s commanded per net trim unit
  double tau_att = 0.1;   // attitude-rate lag, s
};

// Thrust acceleration for a (mean) descent code, clamped to [0, a_max].
double ThrustAccel(double mean_code, const DynamicsParams &params);

using CommandSet = std::array<std::optional<core::CoreCommand>, kNumCores>;

// Explicit Euler. Absent commands (failed cores) are left out of the mean
// code and contribute no trim; with no command at all thrust is zero.
VehicleState StepDynamics(const VehicleState &state,
                          const CommandSet &commands,
                          const DynamicsParams &params, double dt);

// Vertical clearance of each corner above the terrain.
std::array<double, kNumCores> CornerHeights(const VehicleState &state,
                                            const TerrainModel &terrain,
                                            const core::Geometry &geometry);

// Range from each corner to the terrain along the body-down axis, metres.
// Returns +inf when the ray misses the plane.
std::array<double, kNumCores> BodyDownRanges(const VehicleState &state,
                                             const TerrainModel &terrain,
                                             const core::Geometry &geometry);

// Angle between the body vertical and the terrain normal.
double InclinationError(const VehicleState &state,
                        const TerrainModel &terrain);

// Draws a fixed number of variates per sensor per call, whatever is
// enabled, so runs that differ only in jams share their noise sequence.
std::array<core::HoaSample, kNumCores> SampleSensors(
    const VehicleState &state, const TerrainModel &terrain,
    const SensorModel &model, const core::Geometry &geometry, uint64_t step,
    std::mt19937_64 &rng);

struct ScenarioParams {
  VehicleState initial;
  double dt_s = 0.001;
  uint64_t max_steps = 60000;
  double v_max = 0.5;
  double theta_max_deg = 3.0;
  double v_max_degraded = 1.0;
  double theta_max_degraded_deg = 5.0;
  bool record_trace = true;
};

struct LandingConfig {
  fls::FlsEngineConfig engine = fls::DefaultEngineConfig();
  core::CoreParams core;
  int hub_ticks_per_step = 4;
  DynamicsParams dynamics;
  TerrainModel terrain;
  SensorModel sensors;
  FaultPlan faults;
  ScenarioParams scenario;
  uint64_t seed = 1;
};

// Throws Error(kConfig) on the first invalid field.
void Validate(const LandingConfig &config);

struct LandingReport {
  bool touchdown = false;
  double touchdown_speed_mps = 0.0;
  double touchdown_inclination_error_rad = 0.0;
  uint64_t steps_elapsed = 0;
  bool success = false;
  bool degraded = false;
};

struct StepRow {
  uint64_t step = 0;
  double time_s = 0.0;  // end of this step
  VehicleState vehicle;
  std::array<int, kNumCores> descent_code{};  // -1 when the core is down
  std::array<int, kNumCores> thrust_trim{};
};

struct CoreRow {
  uint64_t step = 0;
  int core = 0;
  std::optional<uint32_t> lidar_mm;
  std::optional<uint32_t> radar_mm;
  std::optional<core::SiuOutput> siu;  // nullopt on blackout or core down
  core::IicuEstimate iicu;
  std::optional<core::CoreCommand> command;
};

struct HubRow {
  uint64_t tick = 0;
  int slot = 0;
  std::optional<interconnect::Broadcast> broadcast;
};

struct Trace {
  std::vector<StepRow> steps;
  std::vector<CoreRow> cores;
  std::vector<HubRow> hub;
};

struct LandingRun {
  LandingReport report;
  Trace trace;
};

// Closed loop until touchdown or max_steps. Deterministic for a given
// config; a non-finite vehicle state throws Error(kSimulation).
LandingRun RunLanding(const LandingConfig &config);

std::string ReportCsvHeader();
std::string ReportCsvRow(const LandingReport &report);
std::string ReportSummary(const LandingReport &report);

// Writes trace.csv, core_trace.csv, hub_trace.csv and report.csv into dir
// (created if needed).
void WriteTrace(const LandingRun &run, const std::string &dir);

}  // namespace algas2::scenario

#endif  // ALGAS2_SCENARIO_HPP_
