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

#include "algas2/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "algas2/error.hpp"
#include "algas2/fxp.hpp"
#include "text_util.hpp"

namespace algas2::scenario {
namespace {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
// Separate stream for fault payloads so a fault never shifts sensor noise.
constexpr uint64_t kFaultStreamSalt = 0x9e3779b97f4a7c15ull;

// Body (x forward, y left, z up) to world: roll about x, then pitch about y
// with nose-up positive.
Mat3 Attitude(double roll, double pitch) {
  const double cr = std::cos(roll), sr = std::sin(roll);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  return {{{cp, -sp * sr, -sp * cr}, {0.0, cr, -sr}, {sp, cp * sr, cp * cr}}};
}

Vec3 Apply(const Mat3 &m, const Vec3 &v) {
  return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
          m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
          m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

Vec3 CornerWorld(const VehicleState &s, const Mat3 &r,
                 const core::Geometry &g, int c) {
  const Vec3 body = {core::PitchSign(c) * g.half_span_x_m,
                     core::RollSign(c) * g.half_span_y_m, 0.0};
  Vec3 p = Apply(r, body);
  p[2] += s.altitude_m;
  return p;
}

double TerrainZ(const TerrainModel &t, double x, double y) {
  return t.elevation_m + x * std::tan(t.pitch_rad) + y * std::tan(t.roll_rad);
}

bool Finite(const VehicleState &s) {
  return std::isfinite(s.altitude_m) && std::isfinite(s.v_z) &&
         std::isfinite(s.roll_rad) && std::isfinite(s.pitch_rad) &&
         std::isfinite(s.roll_rate) && std::isfinite(s.pitch_rate);
}

void CheckConfig(bool ok, const std::string &what) {
  if (!ok) throw Error(ErrorCode::kConfig, "scenario config: " + what);
}

std::string Opt(const std::optional<uint32_t> &v) {
  return v ? std::to_string(*v) : "";
}

}  // namespace

bool ActiveFaults::any() const {
  if (hub) return true;
  for (int c = 0; c < kNumCores; ++c) {
    if (core[c] || sensor[c][0] || sensor[c][1]) return true;
  }
  return false;
}

ActiveFaults ApplyFaults(const FaultPlan &plan, uint64_t step) {
  ActiveFaults active;
  for (const Fault &f : plan.faults) {
    if (step < f.start_step) continue;
    if (f.end_step != 0 && step >= f.end_step) continue;
    switch (f.target) {
      case FaultTarget::kCore: active.core[f.id] = f.mode; break;
      case FaultTarget::kSensor:
        active.sensor[f.id][static_cast<int>(f.sensor)] = f.mode;
        break;
      case FaultTarget::kHub: active.hub = f.mode; break;
    }
  }
  return active;
}

double ThrustAccel(double mean_code, const DynamicsParams &params) {
  return std::clamp(params.a_max * (255.0 - mean_code) / 255.0, 0.0,
                    params.a_max);
}

VehicleState StepDynamics(const VehicleState &s, const CommandSet &commands,
                          const DynamicsParams &params, double dt) {
  double code_sum = 0.0;
  int live = 0;
  double roll_moment = 0.0;
  double pitch_moment = 0.0;
  for (int c = 0; c < kNumCores; ++c) {
    if (!commands[c]) continue;
    code_sum += commands[c]->descent_code;
    ++live;
    roll_moment += core::RollSign(c) * commands[c]->thrust_trim;
    pitch_moment += core::PitchSign(c) * commands[c]->thrust_trim;
  }
  const double thrust = live > 0 ? ThrustAccel(code_sum / live, params) : 0.0;
  // Positive trim lowers a corner, so net trim on the left/front side
  // rotates the vehicle left-down/nose-down.
  const double roll_rate_cmd = -params.k_att * roll_moment;
  const double pitch_rate_cmd = -params.k_att * pitch_moment;

  VehicleState n = s;
  n.altitude_m = s.altitude_m + dt * s.v_z;
  n.v_z = s.v_z + dt * (thrust - params.g);
  n.roll_rad = s.roll_rad + dt * s.roll_rate;
  n.pitch_rad = s.pitch_rad + dt * s.pitch_rate;
  n.roll_rate = s.roll_rate + dt * (roll_rate_cmd - s.roll_rate) / params.tau_att;
  n.pitch_rate =
      s.pitch_rate + dt * (pitch_rate_cmd - s.pitch_rate) / params.tau_att;
  return n;
}

std::array<double, kNumCores> CornerHeights(const VehicleState &state,
                                            const TerrainModel &terrain,
                                            const core::Geometry &geometry) {
  const Mat3 r = Attitude(state.roll_rad, state.pitch_rad);
  std::array<double, kNumCores> h{};
  for (int c = 0; c < kNumCores; ++c) {
    const Vec3 p = CornerWorld(state, r, geometry, c);
    h[c] = p[2] - TerrainZ(terrain, p[0], p[1]);
  }
  return h;
}

std::array<double, kNumCores> BodyDownRanges(const VehicleState &state,
                                             const TerrainModel &terrain,
                                             const core::Geometry &geometry) {
  const Mat3 r = Attitude(state.roll_rad, state.pitch_rad);
  const Vec3 down = Apply(r, {0.0, 0.0, -1.0});
  const double tp = std::tan(terrain.pitch_rad);
  const double tr = std::tan(terrain.roll_rad);
  const double denom = down[2] - down[0] * tp - down[1] * tr;
  std::array<double, kNumCores> out{};
  for (int c = 0; c < kNumCores; ++c) {
    const Vec3 p = CornerWorld(state, r, geometry, c);
    const double t =
        (terrain.elevation_m + p[0] * tp + p[1] * tr - p[2]) / denom;
    out[c] = (denom < 0.0 && t >= 0.0) ? t
                                       : std::numeric_limits<double>::infinity();
    if (denom < 0.0 && t < 0.0) out[c] = 0.0;  // corner already below plane
  }
  return out;
}

double InclinationError(const VehicleState &state,
                        const TerrainModel &terrain) {
  const Vec3 up = Apply(Attitude(state.roll_rad, state.pitch_rad), {0, 0, 1});
  Vec3 n = {-std::tan(terrain.pitch_rad), -std::tan(terrain.roll_rad), 1.0};
  const double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  const double dot = (up[0] * n[0] + up[1] * n[1] + up[2] * n[2]) / norm;
  return std::acos(std::clamp(dot, -1.0, 1.0));
}

std::array<core::HoaSample, kNumCores> SampleSensors(
    const VehicleState &state, const TerrainModel &terrain,
    const SensorModel &model, const core::Geometry &geometry, uint64_t step,
    std::mt19937_64 &rng) {
  const auto ranges = BodyDownRanges(state, terrain, geometry);
  std::normal_distribution<double> unit_normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::array<core::HoaSample, kNumCores> out{};
  for (int c = 0; c < kNumCores; ++c) {
    const double truth_mm = std::min(ranges[c] * 1000.0, model.max_range_mm);
    out[c].step = step;
    for (int s = 0; s < 2; ++s) {
      const Sensor sensor = static_cast<Sensor>(s);
      const double sigma =
          sensor == Sensor::kLidar ? model.lidar_sigma_mm : model.radar_sigma_mm;
      const double dropout =
          sensor == Sensor::kLidar ? model.lidar_dropout : model.radar_dropout;
      const double noise = unit_normal(rng) * sigma;
      const bool dropped = unit(rng) < dropout;
      const double garbage = unit(rng) * model.max_range_mm;
      double reading = truth_mm + noise;
      for (const JamInterval &jam : model.jams) {
        if (jam.corner != c || jam.sensor != sensor) continue;
        if (step < jam.start_step || step >= jam.end_step) continue;
        reading = jam.mode == JamMode::kBias ? truth_mm + jam.bias_mm : garbage;
      }
      const auto mm = static_cast<uint32_t>(
          std::clamp<int64_t>(fxp::RoundHalfAway(reading), 0,
                              fxp::RoundHalfAway(model.max_range_mm)));
      if (sensor == Sensor::kLidar) {
        out[c].lidar_mm = mm;
        out[c].lidar_valid = !dropped;
      } else {
        out[c].radar_mm = mm;
        out[c].radar_valid = !dropped;
      }
    }
  }
  return out;
}

void Validate(const LandingConfig &config) {
  fls::Validate(config.engine);
  const ScenarioParams &s = config.scenario;
  CheckConfig(s.dt_s > 0.0 && std::isfinite(s.dt_s), "dt_s must be > 0");
  CheckConfig(s.max_steps > 0, "max_steps must be > 0");
  CheckConfig(s.v_max > 0.0 && s.v_max_degraded >= s.v_max,
              "need 0 < v_max <= v_max_degraded");
  CheckConfig(s.theta_max_deg > 0.0 &&
                  s.theta_max_degraded_deg >= s.theta_max_deg,
              "need 0 < theta_max_deg <= theta_max_degraded_deg");
  CheckConfig(config.hub_ticks_per_step >= 0, "hub ticks_per_step must be >= 0");
  const core::CoreParams &c = config.core;
  CheckConfig(c.geometry.half_span_x_m > 0.0 && c.geometry.half_span_y_m > 0.0,
              "geometry half-spans must be > 0");
  CheckConfig(c.fusion.agreement_mm >= 0, "agreement_mm must be >= 0");
  CheckConfig(c.fusion.rate_window_steps >= 1 &&
                  c.fusion.rate_window_steps <= core::kMaxRateWindow,
              "rate_window_steps must be in [1, " +
                  std::to_string(core::kMaxRateWindow) + "]");
  CheckConfig(c.fusion.recovery_steps >= 1, "recovery_steps must be >= 1");
  CheckConfig(std::abs(c.fusion.dt_s - s.dt_s) < 1e-12,
              "fusion dt must equal the control step");
  CheckConfig(c.max_neighbor_staleness >= 0, "staleness bound must be >= 0");
  CheckConfig(c.trim_limit >= 0, "trim_limit must be >= 0");
  const DynamicsParams &d = config.dynamics;
  CheckConfig(d.g > 0.0 && d.a_max > 0.0 && d.tau_att > 0.0,
              "dynamics parameters must be > 0");
  const SensorModel &m = config.sensors;
  CheckConfig(m.lidar_sigma_mm >= 0.0 && m.radar_sigma_mm >= 0.0,
              "sensor sigma must be >= 0");
  CheckConfig(m.lidar_dropout >= 0.0 && m.lidar_dropout <= 1.0 &&
                  m.radar_dropout >= 0.0 && m.radar_dropout <= 1.0,
              "dropout probability must be in [0, 1]");
  CheckConfig(m.max_range_mm > 0.0, "max_range_mm must be > 0");
  for (const auto &jam : m.jams) {
    CheckConfig(jam.corner >= 0 && jam.corner < kNumCores, "jam corner id");
    CheckConfig(jam.end_step >= jam.start_step, "jam interval order");
  }
  for (const auto &f : config.faults.faults) {
    CheckConfig(f.target == FaultTarget::kHub ||
                    (f.id >= 0 && f.id < kNumCores),
                "fault target id");
    CheckConfig(f.end_step == 0 || f.end_step >= f.start_step,
                "fault interval order");
  }
  CheckConfig(std::abs(config.terrain.roll_rad) < 1.2 &&
                  std::abs(config.terrain.pitch_rad) < 1.2,
              "terrain inclination out of range");
  const VehicleState &v = s.initial;
  CheckConfig(Finite(v), "initial state must be finite");
  CheckConfig(v.altitude_m >= 0.0, "initial altitude must be >= 0");
}

LandingRun RunLanding(const LandingConfig &config) {
  Validate(config);
  const fls::FlsEngine engine(config.engine);
  const ScenarioParams &sp = config.scenario;
  std::mt19937_64 sensor_rng(config.seed);
  std::mt19937_64 fault_rng(config.seed ^ kFaultStreamSalt);
  std::uniform_int_distribution<int> any_code(0, 255);
  std::uniform_int_distribution<int> any_trim(-config.core.trim_limit,
                                              config.core.trim_limit);
  std::uniform_int_distribution<int> any_distance(0, 2047);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  LandingRun run;
  LandingReport &report = run.report;
  VehicleState vehicle = sp.initial;
  std::array<core::CoreState, kNumCores> states;
  states.fill(core::CoreState::Initial(engine));
  std::array<std::optional<interconnect::NIMessage>, kNumCores> pending;
  interconnect::HubState hub;

  auto touched = [&](const VehicleState &v) {
    const auto h = CornerHeights(v, config.terrain, config.core.geometry);
    return *std::min_element(h.begin(), h.end()) <= 0.0;
  };

  uint64_t step = 0;
  bool down = touched(vehicle);
  while (!down && step < sp.max_steps) {
    const ActiveFaults faults = ApplyFaults(config.faults, step);
    if (faults.any()) report.degraded = true;

    auto samples = SampleSensors(vehicle, config.terrain, config.sensors,
                                 config.core.geometry, step, sensor_rng);
    for (const JamInterval &jam : config.sensors.jams) {
      if (step >= jam.start_step && step < jam.end_step) report.degraded = true;
    }
    for (int c = 0; c < kNumCores; ++c) {
      for (int s = 0; s < 2; ++s) {
        const auto mode = faults.sensor[c][s];
        // Always drawn to keep the fault stream aligned across runs.
        const auto junk = static_cast<uint32_t>(unit(fault_rng) *
                                                config.sensors.max_range_mm);
        if (!mode) continue;
        uint32_t &mm = s == 0 ? samples[c].lidar_mm : samples[c].radar_mm;
        bool &valid = s == 0 ? samples[c].lidar_valid : samples[c].radar_valid;
        if (*mode == FaultMode::kFailStop) {
          valid = false;
        } else {
          mm = junk;
        }
      }
    }

    // Cyber level: last step's messages go out through the hub.
    for (int c = 0; c < kNumCores; ++c) {
      if (pending[c]) hub = interconnect::NiPost(hub, *pending[c]);
      pending[c].reset();
    }
    if (faults.hub != FaultMode::kFailStop) {
      for (int t = 0; t < config.hub_ticks_per_step; ++t) {
        auto tick = interconnect::HubTick(hub);
        hub = std::move(tick.hub);
        if (tick.broadcast && faults.hub == FaultMode::kGarbage) {
          const int src = tick.broadcast->slot;
          const auto junk = static_cast<uint16_t>(any_distance(fault_rng));
          for (int dst = 0; dst < kNumCores; ++dst) {
            if (tick.broadcast->delivered_mask & (1u << dst)) {
              hub.mailbox[dst][src]->fused_distance_raw = junk;
            }
          }
          tick.broadcast->msg.fused_distance_raw = junk;
        }
        if (sp.record_trace) {
          run.trace.hub.push_back({hub.tick - 1,
                                   static_cast<int>((hub.slot_counter + 3) % 4),
                                   tick.broadcast});
        }
      }
    }

    CommandSet commands;
    StepRow row;
    row.step = step;
    for (int c = 0; c < kNumCores; ++c) {
      CoreRow crow;
      crow.step = step;
      crow.core = c;
      if (samples[c].lidar_valid) crow.lidar_mm = samples[c].lidar_mm;
      if (samples[c].radar_valid) crow.radar_mm = samples[c].radar_mm;
      const auto mode = faults.core[c];
      if (mode == FaultMode::kFailStop) {
        crow.iicu = states[c].iicu;
      } else if (mode == FaultMode::kGarbage) {
        core::CoreCommand junk;
        junk.descent_code = static_cast<uint8_t>(any_code(fault_rng));
        junk.thrust_trim = any_trim(fault_rng);
        junk.source_core = static_cast<uint8_t>(c);
        junk.step = step;
        commands[c] = junk;
        pending[c] = interconnect::NIMessage{
            static_cast<uint8_t>(c),
            static_cast<uint16_t>(any_distance(fault_rng)), step};
        crow.iicu = states[c].iicu;
        crow.command = junk;
      } else {
        const auto siu =
            core::SiuFuse(samples[c], states[c], config.core.fusion);
        if (!siu || siu->health != core::Health::kNominal) {
          report.degraded = true;
        }
        const auto inbox = interconnect::NiCollect(hub, c, step);
        auto result = core::CoreStep(c, states[c], siu, inbox, engine,
                                     config.core, step);
        states[c] = result.next;
        commands[c] = result.command;
        pending[c] = result.outgoing;
        crow.siu = siu;
        crow.iicu = result.next.iicu;
        crow.command = result.command;
      }
      row.descent_code[c] = commands[c] ? commands[c]->descent_code : -1;
      row.thrust_trim[c] = commands[c] ? commands[c]->thrust_trim : 0;
      if (sp.record_trace) run.trace.cores.push_back(crow);
    }

    vehicle = StepDynamics(vehicle, commands, config.dynamics, sp.dt_s);
    if (!Finite(vehicle)) {
      throw Error(ErrorCode::kSimulation,
                  "non-finite vehicle state at step " + std::to_string(step));
    }
    row.vehicle = vehicle;
    row.time_s = static_cast<double>(step + 1) * sp.dt_s;
    if (sp.record_trace) run.trace.steps.push_back(row);
    ++step;
    down = touched(vehicle);
  }

  report.steps_elapsed = step;
  report.touchdown = down;
  if (down) {
    report.touchdown_speed_mps = std::abs(vehicle.v_z);
    report.touchdown_inclination_error_rad =
        InclinationError(vehicle, config.terrain);
    const double v_lim = report.degraded ? sp.v_max_degraded : sp.v_max;
    const double th_lim =
        (report.degraded ? sp.theta_max_degraded_deg : sp.theta_max_deg) *
        kDegToRad;
    report.success = report.touchdown_speed_mps <= v_lim &&
                     report.touchdown_inclination_error_rad <= th_lim;
  }
  return run;
}

std::string ReportCsvHeader() {
  return "touchdown,touchdown_speed_mps,touchdown_inclination_error_deg,"
         "steps_elapsed,success,degraded";
}

std::string ReportCsvRow(const LandingReport &r) {
  std::ostringstream out;
  out << (r.touchdown ? 1 : 0) << ',' << text::Fixed(r.touchdown_speed_mps, 6)
      << ','
      << text::Fixed(r.touchdown_inclination_error_rad / kDegToRad, 6) << ','
      << r.steps_elapsed << ',' << (r.success ? 1 : 0) << ','
      << (r.degraded ? 1 : 0);
  return out.str();
}

std::string ReportSummary(const LandingReport &r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "touchdown:            %s\n"
                "touchdown speed:      %.3f m/s\n"
                "inclination error:    %.3f deg\n"
                "steps elapsed:        %llu\n"
                "degraded:             %s\n"
                "result:               %s\n",
                r.touchdown ? "yes" : "no", r.touchdown_speed_mps,
                r.touchdown_inclination_error_rad / kDegToRad,
                static_cast<unsigned long long>(r.steps_elapsed),
                r.degraded ? "yes" : "no", r.success ? "SUCCESS" : "FAILURE");
  return buf;
}

void WriteTrace(const LandingRun &run, const std::string &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir + ": " + ec.message());
  auto open = [&](const char *name) {
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
    return out;
  };

  {
    auto out = open("trace.csv");
    out << "step,time_s,altitude_m,v_z,roll_rad,pitch_rad,roll_rate,"
           "pitch_rate";
    for (int c = 0; c < kNumCores; ++c) {
      out << ",code" << c << ",trim" << c;
    }
    out << '\n';
    for (const StepRow &r : run.trace.steps) {
      const VehicleState &v = r.vehicle;
      out << r.step << ',' << text::Fixed(r.time_s, 4) << ','
          << text::Fixed(v.altitude_m, 6) << ',' << text::Fixed(v.v_z, 6)
          << ',' << text::Fixed(v.roll_rad, 6) << ','
          << text::Fixed(v.pitch_rad, 6) << ',' << text::Fixed(v.roll_rate, 6)
          << ',' << text::Fixed(v.pitch_rate, 6);
      for (int c = 0; c < kNumCores; ++c) {
        out << ',' << r.descent_code[c] << ',' << r.thrust_trim[c];
      }
      out << '\n';
    }
  }
  {
    auto out = open("core_trace.csv");
    out << "step,core,lidar_mm,radar_mm,fused_raw,health,closure_rate_raw,"
           "roll_mrad,pitch_mrad,confidence,descent_code,thrust_trim\n";
    for (const CoreRow &r : run.trace.cores) {
      out << r.step << ',' << r.core << ',' << Opt(r.lidar_mm) << ','
          << Opt(r.radar_mm) << ',';
      if (r.siu) {
        out << r.siu->fused_distance_raw << ',' << core::ToString(r.siu->health)
            << ',' << r.siu->closure_rate_raw;
      } else {
        out << ",BLACKOUT,";
      }
      out << ',' << r.iicu.roll_mrad << ',' << r.iicu.pitch_mrad << ','
          << core::ToString(r.iicu.confidence) << ',';
      if (r.command) {
        out << static_cast<int>(r.command->descent_code) << ','
            << r.command->thrust_trim;
      } else {
        out << ',';
      }
      out << '\n';
    }
  }
  {
    auto out = open("hub_trace.csv");
    out << interconnect::HubTraceCsvHeader() << '\n';
    for (const HubRow &r : run.trace.hub) {
      out << interconnect::HubTraceCsvRow(r.tick, r.slot, r.broadcast) << '\n';
    }
  }
  {
    auto out = open("report.csv");
    out << ReportCsvHeader() << '\n' << ReportCsvRow(run.report) << '\n';
  }
}

}  // namespace algas2::scenario
