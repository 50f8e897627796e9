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

#include "algas2/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "algas2/error.hpp"
#include "json.hpp"

namespace algas2::config {
namespace {

using Json = nlohmann::ordered_json;

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

[[noreturn]] void Fail(const std::string &what) {
  throw Error(ErrorCode::kConfig, "config: " + what);
}

void CheckKeys(const Json &obj, const std::set<std::string> &allowed,
               const std::string &ctx) {
  if (!obj.is_object()) Fail(ctx + " must be an object");
  for (const auto &[key, _] : obj.items()) {
    if (!allowed.count(key)) Fail("unknown key '" + ctx + "." + key + "'");
  }
}

template <typename T>
void Read(const Json &obj, const char *key, T &out, const std::string &ctx) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception &) {
    Fail("bad value for '" + ctx + "." + key + "'");
  }
}

void ReadDeg(const Json &obj, const char *key, double &out_rad,
             const std::string &ctx) {
  double deg = out_rad / kDegToRad;
  Read(obj, key, deg, ctx);
  out_rad = deg * kDegToRad;
}

fxp::QFormat FormatFromJson(const Json &j, const std::string &ctx) {
  CheckKeys(j, {"bits", "signed", "scale_pow2"}, ctx);
  if (!j.contains("bits")) Fail(ctx + ".bits is required");
  fxp::QFormat f;
  Read(j, "bits", f.total_bits, ctx);
  Read(j, "signed", f.is_signed, ctx);
  Read(j, "scale_pow2", f.scale_pow2, ctx);
  if (!f.valid()) Fail(ctx + " width out of [2, 32]");
  return f;
}

Json FormatToJson(const fxp::QFormat &f) {
  return Json{{"bits", f.total_bits},
              {"signed", f.is_signed},
              {"scale_pow2", f.scale_pow2}};
}

Json Parse(std::string_view text, const std::string &what) {
  try {
    return Json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const nlohmann::json::exception &e) {
    Fail(what + ": " + e.what());
  }
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string Resolve(const std::string &base_dir, const std::string &p) {
  if (p.empty()) return p;
  const std::filesystem::path path(p);
  if (path.is_absolute() || base_dir.empty()) return path.lexically_normal();
  return (std::filesystem::path(base_dir) / path).lexically_normal().string();
}

fls::FlsEngineConfig EngineFromJsonValue(const Json &j) {
  const std::string ctx = "engine";
  CheckKeys(j, {"inputs", "rules", "consequents", "widths", "initial_hold_code"},
            ctx);
  fls::FlsEngineConfig e;
  if (!j.contains("inputs") || !j["inputs"].is_array() ||
      j["inputs"].size() != fls::kNumInputs) {
    Fail("engine.inputs must list exactly 2 inputs");
  }
  for (int i = 0; i < fls::kNumInputs; ++i) {
    const Json &in = j["inputs"][i];
    const std::string ictx = ctx + ".inputs[" + std::to_string(i) + "]";
    CheckKeys(in, {"name", "format", "unit", "unit_per_lsb", "mfs"}, ictx);
    fls::InputSpec spec;
    Read(in, "name", spec.name, ictx);
    if (!in.contains("format")) Fail(ictx + ".format is required");
    spec.format = FormatFromJson(in["format"], ictx + ".format");
    Read(in, "unit", spec.unit, ictx);
    Read(in, "unit_per_lsb", spec.unit_per_lsb, ictx);
    if (!in.contains("mfs") || !in["mfs"].is_array()) {
      Fail(ictx + ".mfs must be an array");
    }
    for (const Json &m : in["mfs"]) {
      CheckKeys(m, {"name", "kind", "breakpoints"}, ictx + ".mfs");
      fls::MembershipFunction mf;
      Read(m, "name", mf.name, ictx);
      std::string kind = "triangular";
      Read(m, "kind", kind, ictx);
      if (kind == "triangular") {
        mf.kind = fls::MfKind::kTriangular;
      } else if (kind == "trapezoidal") {
        mf.kind = fls::MfKind::kTrapezoidal;
      } else {
        Fail(ictx + ": unknown membership kind '" + kind + "'");
      }
      Read(m, "breakpoints", mf.breakpoints, ictx);
      spec.mfs.push_back(std::move(mf));
    }
    e.inputs[i] = std::move(spec);
  }
  if (j.contains("rules")) {
    if (!j["rules"].is_array()) Fail("engine.rules must be an array");
    for (const Json &r : j["rules"]) {
      CheckKeys(r, {"antecedents", "consequent"}, "engine.rules");
      fls::Rule rule;
      std::vector<int> ante;
      Read(r, "antecedents", ante, "engine.rules");
      if (ante.size() != fls::kNumInputs) {
        Fail("engine.rules: each rule needs 2 antecedents");
      }
      rule.antecedents = {ante[0], ante[1]};
      Read(r, "consequent", rule.consequent, "engine.rules");
      e.rules.push_back(rule);
    }
  }
  Read(j, "consequents", e.consequents, ctx);
  if (j.contains("widths")) {
    const Json &w = j["widths"];
    if (!w.is_object()) Fail("engine.widths must be an object");
    for (const auto &[name, fmt] : w.items()) {
      e.widths.Assign(name, FormatFromJson(fmt, "engine.widths." + name));
    }
  }
  Read(j, "initial_hold_code", e.initial_hold_code, ctx);
  fls::Validate(e);
  return e;
}

Json EngineToJsonValue(const fls::FlsEngineConfig &e) {
  Json inputs = Json::array();
  for (const auto &in : e.inputs) {
    Json mfs = Json::array();
    for (const auto &mf : in.mfs) {
      mfs.push_back(
          Json{{"name", mf.name},
               {"kind", mf.kind == fls::MfKind::kTriangular ? "triangular"
                                                            : "trapezoidal"},
               {"breakpoints", mf.breakpoints}});
    }
    inputs.push_back(Json{{"name", in.name},
                          {"format", FormatToJson(in.format)},
                          {"unit", in.unit},
                          {"unit_per_lsb", in.unit_per_lsb},
                          {"mfs", mfs}});
  }
  Json rules = Json::array();
  for (const auto &r : e.rules) {
    rules.push_back(Json{{"antecedents", {r.antecedents[0], r.antecedents[1]}},
                         {"consequent", r.consequent}});
  }
  Json widths = Json::object();
  for (const auto &[name, fmt] : e.widths.ToMap()) {
    widths[name] = FormatToJson(fmt);
  }
  return Json{{"inputs", inputs},
              {"rules", rules},
              {"consequents", e.consequents},
              {"widths", widths},
              {"initial_hold_code", e.initial_hold_code}};
}

scenario::Sensor SensorFromName(const std::string &s, const std::string &ctx) {
  if (s == "lidar") return scenario::Sensor::kLidar;
  if (s == "radar") return scenario::Sensor::kRadar;
  Fail(ctx + ": sensor must be 'lidar' or 'radar'");
}

const char *SensorName(scenario::Sensor s) {
  return s == scenario::Sensor::kLidar ? "lidar" : "radar";
}

}  // namespace

fls::FlsEngineConfig EngineFromJson(std::string_view text) {
  return EngineFromJsonValue(Parse(text, "engine config"));
}

std::string EngineToJson(const fls::FlsEngineConfig &engine) {
  return EngineToJsonValue(engine).dump(2) + "\n";
}

fls::FlsEngineConfig LoadEngineConfig(const std::string &path) {
  return EngineFromJson(ReadFile(path));
}

void StoreEngineConfig(const std::string &path,
                       const fls::FlsEngineConfig &engine) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << EngineToJson(engine);
}

RunConfig ParseRunConfig(std::string_view text, const std::string &base_dir) {
  const Json j = Parse(text, "run config");
  CheckKeys(j,
            {"seed", "engine", "verify", "bench", "fusion", "iicu", "hub",
             "dynamics", "terrain", "sensors", "faults", "scenario"},
            "config");
  RunConfig rc;
  scenario::LandingConfig &lc = rc.landing;
  Read(j, "seed", lc.seed, "config");

  if (j.contains("engine")) {
    const Json &e = j["engine"];
    if (e.is_object() && e.contains("file")) {
      CheckKeys(e, {"file"}, "engine");
      lc.engine =
          LoadEngineConfig(Resolve(base_dir, e["file"].get<std::string>()));
    } else {
      lc.engine = EngineFromJsonValue(e);
    }
  }

  if (j.contains("verify")) {
    const Json &v = j["verify"];
    CheckKeys(v, {"golden", "golden_budget", "sweep_budget"}, "verify");
    Read(v, "golden", rc.verify.golden_path, "verify");
    rc.verify.golden_path = Resolve(base_dir, rc.verify.golden_path);
    Read(v, "golden_budget", rc.verify.golden_budget, "verify");
    Read(v, "sweep_budget", rc.verify.sweep_budget, "verify");
  }

  if (j.contains("bench")) {
    const Json &b = j["bench"];
    CheckKeys(b, {"cores", "clock_mhz", "expected_gops", "tolerance", "schedule"},
              "bench");
    Read(b, "cores", rc.bench.cores, "bench");
    Read(b, "clock_mhz", rc.bench.clock_mhz, "bench");
    Read(b, "expected_gops", rc.bench.expected_gops, "bench");
    Read(b, "tolerance", rc.bench.tolerance, "bench");
    if (b.contains("schedule")) {
      const Json &s = b["schedule"];
      CheckKeys(s,
                {"fuzzify_latency", "rule_min_latency", "rules_per_mac",
                 "divider_latency", "max_rules"},
                "bench.schedule");
      auto &o = rc.bench.schedule;
      Read(s, "fuzzify_latency", o.fuzzify_latency, "bench.schedule");
      Read(s, "rule_min_latency", o.rule_min_latency, "bench.schedule");
      Read(s, "rules_per_mac", o.rules_per_mac, "bench.schedule");
      Read(s, "divider_latency", o.divider_latency, "bench.schedule");
      Read(s, "max_rules", o.max_rules, "bench.schedule");
    }
  }

  if (j.contains("fusion")) {
    const Json &f = j["fusion"];
    CheckKeys(f, {"agreement_mm", "rate_window_steps", "recovery_steps"},
              "fusion");
    Read(f, "agreement_mm", lc.core.fusion.agreement_mm, "fusion");
    Read(f, "rate_window_steps", lc.core.fusion.rate_window_steps, "fusion");
    Read(f, "recovery_steps", lc.core.fusion.recovery_steps, "fusion");
  }

  if (j.contains("iicu")) {
    const Json &c = j["iicu"];
    CheckKeys(c,
              {"half_span_x_m", "half_span_y_m", "k_trim", "trim_limit",
               "max_neighbor_staleness"},
              "iicu");
    Read(c, "half_span_x_m", lc.core.geometry.half_span_x_m, "iicu");
    Read(c, "half_span_y_m", lc.core.geometry.half_span_y_m, "iicu");
    Read(c, "k_trim", lc.core.k_trim, "iicu");
    Read(c, "trim_limit", lc.core.trim_limit, "iicu");
    Read(c, "max_neighbor_staleness", lc.core.max_neighbor_staleness, "iicu");
  }

  if (j.contains("hub")) {
    CheckKeys(j["hub"], {"ticks_per_step"}, "hub");
    Read(j["hub"], "ticks_per_step", lc.hub_ticks_per_step, "hub");
  }

  if (j.contains("dynamics")) {
    const Json &d = j["dynamics"];
    CheckKeys(d, {"g", "hover_code", "k_att", "tau_att"}, "dynamics");
    Read(d, "g", lc.dynamics.g, "dynamics");
    double hover = 128.0;
    Read(d, "hover_code", hover, "dynamics");
    if (!(hover > 0.0 && hover < 255.0)) {
      Fail("dynamics.hover_code must be in (0, 255)");
    }
    lc.dynamics.a_max = lc.dynamics.g * 255.0 / (255.0 - hover);
    Read(d, "k_att", lc.dynamics.k_att, "dynamics");
    Read(d, "tau_att", lc.dynamics.tau_att, "dynamics");
  }

  if (j.contains("terrain")) {
    const Json &t = j["terrain"];
    CheckKeys(t, {"roll_deg", "pitch_deg", "elevation_m"}, "terrain");
    ReadDeg(t, "roll_deg", lc.terrain.roll_rad, "terrain");
    ReadDeg(t, "pitch_deg", lc.terrain.pitch_rad, "terrain");
    Read(t, "elevation_m", lc.terrain.elevation_m, "terrain");
  }

  if (j.contains("sensors")) {
    const Json &s = j["sensors"];
    CheckKeys(s,
              {"lidar_sigma_mm", "radar_sigma_mm", "lidar_dropout",
               "radar_dropout", "max_range_mm", "jams"},
              "sensors");
    auto &m = lc.sensors;
    Read(s, "lidar_sigma_mm", m.lidar_sigma_mm, "sensors");
    Read(s, "radar_sigma_mm", m.radar_sigma_mm, "sensors");
    Read(s, "lidar_dropout", m.lidar_dropout, "sensors");
    Read(s, "radar_dropout", m.radar_dropout, "sensors");
    Read(s, "max_range_mm", m.max_range_mm, "sensors");
    if (s.contains("jams")) {
      if (!s["jams"].is_array()) Fail("sensors.jams must be an array");
      for (const Json &jj : s["jams"]) {
        CheckKeys(jj,
                  {"corner", "sensor", "start_step", "end_step", "mode",
                   "bias_mm"},
                  "sensors.jams");
        scenario::JamInterval jam;
        Read(jj, "corner", jam.corner, "sensors.jams");
        std::string sensor = "lidar", mode = "garbage";
        Read(jj, "sensor", sensor, "sensors.jams");
        jam.sensor = SensorFromName(sensor, "sensors.jams");
        Read(jj, "start_step", jam.start_step, "sensors.jams");
        Read(jj, "end_step", jam.end_step, "sensors.jams");
        Read(jj, "mode", mode, "sensors.jams");
        if (mode == "garbage") {
          jam.mode = scenario::JamMode::kGarbage;
        } else if (mode == "bias") {
          jam.mode = scenario::JamMode::kBias;
        } else {
          Fail("sensors.jams: mode must be 'garbage' or 'bias'");
        }
        Read(jj, "bias_mm", jam.bias_mm, "sensors.jams");
        m.jams.push_back(jam);
      }
    }
  }

  if (j.contains("faults")) {
    if (!j["faults"].is_array()) Fail("faults must be an array");
    for (const Json &f : j["faults"]) {
      CheckKeys(f, {"target", "id", "sensor", "start_step", "end_step", "mode"},
                "faults");
      scenario::Fault fault;
      std::string target = "core", mode = "fail_stop", sensor = "lidar";
      Read(f, "target", target, "faults");
      if (target == "core") {
        fault.target = scenario::FaultTarget::kCore;
      } else if (target == "sensor") {
        fault.target = scenario::FaultTarget::kSensor;
      } else if (target == "hub") {
        fault.target = scenario::FaultTarget::kHub;
      } else {
        Fail("faults: target must be 'core', 'sensor' or 'hub'");
      }
      Read(f, "id", fault.id, "faults");
      Read(f, "sensor", sensor, "faults");
      fault.sensor = SensorFromName(sensor, "faults");
      Read(f, "start_step", fault.start_step, "faults");
      Read(f, "end_step", fault.end_step, "faults");
      Read(f, "mode", mode, "faults");
      if (mode == "fail_stop") {
        fault.mode = scenario::FaultMode::kFailStop;
      } else if (mode == "garbage") {
        fault.mode = scenario::FaultMode::kGarbage;
      } else {
        Fail("faults: mode must be 'fail_stop' or 'garbage'");
      }
      lc.faults.faults.push_back(fault);
    }
  }

  if (j.contains("scenario")) {
    const Json &s = j["scenario"];
    CheckKeys(s,
              {"initial_altitude_m", "initial_v_z", "initial_roll_deg",
               "initial_pitch_deg", "dt_s", "max_steps", "v_max",
               "theta_max_deg", "v_max_degraded", "theta_max_degraded_deg"},
              "scenario");
    auto &p = lc.scenario;
    Read(s, "initial_altitude_m", p.initial.altitude_m, "scenario");
    Read(s, "initial_v_z", p.initial.v_z, "scenario");
    ReadDeg(s, "initial_roll_deg", p.initial.roll_rad, "scenario");
    ReadDeg(s, "initial_pitch_deg", p.initial.pitch_rad, "scenario");
    Read(s, "dt_s", p.dt_s, "scenario");
    Read(s, "max_steps", p.max_steps, "scenario");
    Read(s, "v_max", p.v_max, "scenario");
    Read(s, "theta_max_deg", p.theta_max_deg, "scenario");
    Read(s, "v_max_degraded", p.v_max_degraded, "scenario");
    Read(s, "theta_max_degraded_deg", p.theta_max_degraded_deg, "scenario");
  }
  lc.core.fusion.dt_s = lc.scenario.dt_s;

  Validate(rc);
  return rc;
}

RunConfig LoadRunConfig(const std::string &path) {
  const std::string dir =
      std::filesystem::path(path).parent_path().string();
  return ParseRunConfig(ReadFile(path), dir);
}

std::string RunConfigToJson(const RunConfig &rc) {
  const scenario::LandingConfig &lc = rc.landing;
  Json jams = Json::array();
  for (const auto &jam : lc.sensors.jams) {
    jams.push_back(Json{
        {"corner", jam.corner},
        {"sensor", SensorName(jam.sensor)},
        {"start_step", jam.start_step},
        {"end_step", jam.end_step},
        {"mode", jam.mode == scenario::JamMode::kBias ? "bias" : "garbage"},
        {"bias_mm", jam.bias_mm}});
  }
  Json faults = Json::array();
  for (const auto &f : lc.faults.faults) {
    const char *target = f.target == scenario::FaultTarget::kCore     ? "core"
                         : f.target == scenario::FaultTarget::kSensor ? "sensor"
                                                                      : "hub";
    faults.push_back(Json{
        {"target", target},
        {"id", f.id},
        {"sensor", SensorName(f.sensor)},
        {"start_step", f.start_step},
        {"end_step", f.end_step},
        {"mode", f.mode == scenario::FaultMode::kFailStop ? "fail_stop"
                                                          : "garbage"}});
  }
  const auto &o = rc.bench.schedule;
  Json j{
      {"seed", lc.seed},
      {"engine", EngineToJsonValue(lc.engine)},
      {"verify",
       {{"golden", rc.verify.golden_path},
        {"golden_budget", rc.verify.golden_budget},
        {"sweep_budget", rc.verify.sweep_budget}}},
      {"bench",
       {{"cores", rc.bench.cores},
        {"clock_mhz", rc.bench.clock_mhz},
        {"expected_gops", rc.bench.expected_gops},
        {"tolerance", rc.bench.tolerance},
        {"schedule",
         {{"fuzzify_latency", o.fuzzify_latency},
          {"rule_min_latency", o.rule_min_latency},
          {"rules_per_mac", o.rules_per_mac},
          {"divider_latency", o.divider_latency},
          {"max_rules", o.max_rules}}}}},
      {"fusion",
       {{"agreement_mm", lc.core.fusion.agreement_mm},
        {"rate_window_steps", lc.core.fusion.rate_window_steps},
        {"recovery_steps", lc.core.fusion.recovery_steps}}},
      {"iicu",
       {{"half_span_x_m", lc.core.geometry.half_span_x_m},
        {"half_span_y_m", lc.core.geometry.half_span_y_m},
        {"k_trim", lc.core.k_trim},
        {"trim_limit", lc.core.trim_limit},
        {"max_neighbor_staleness", lc.core.max_neighbor_staleness}}},
      {"hub", {{"ticks_per_step", lc.hub_ticks_per_step}}},
      {"dynamics",
       {{"g", lc.dynamics.g},
        {"hover_code", 255.0 * (1.0 - lc.dynamics.g / lc.dynamics.a_max)},
        {"k_att", lc.dynamics.k_att},
        {"tau_att", lc.dynamics.tau_att}}},
      {"terrain",
       {{"roll_deg", lc.terrain.roll_rad / kDegToRad},
        {"pitch_deg", lc.terrain.pitch_rad / kDegToRad},
        {"elevation_m", lc.terrain.elevation_m}}},
      {"sensors",
       {{"lidar_sigma_mm", lc.sensors.lidar_sigma_mm},
        {"radar_sigma_mm", lc.sensors.radar_sigma_mm},
        {"lidar_dropout", lc.sensors.lidar_dropout},
        {"radar_dropout", lc.sensors.radar_dropout},
        {"max_range_mm", lc.sensors.max_range_mm},
        {"jams", jams}}},
      {"faults", faults},
      {"scenario",
       {{"initial_altitude_m", lc.scenario.initial.altitude_m},
        {"initial_v_z", lc.scenario.initial.v_z},
        {"initial_roll_deg", lc.scenario.initial.roll_rad / kDegToRad},
        {"initial_pitch_deg", lc.scenario.initial.pitch_rad / kDegToRad},
        {"dt_s", lc.scenario.dt_s},
        {"max_steps", lc.scenario.max_steps},
        {"v_max", lc.scenario.v_max},
        {"theta_max_deg", lc.scenario.theta_max_deg},
        {"v_max_degraded", lc.scenario.v_max_degraded},
        {"theta_max_degraded_deg", lc.scenario.theta_max_degraded_deg}}}};
  return j.dump(2) + "\n";
}

const std::vector<std::string> &SweepParameters() {
  static const std::vector<std::string> kNames = {
      "inclination_deg", "terrain_roll_deg", "terrain_pitch_deg",
      "noise_mm",        "lidar_sigma_mm",   "radar_sigma_mm",
      "dropout",         "fault_start_step", "initial_altitude_m",
      "agreement_mm",    "seed"};
  return kNames;
}

void ApplyParameter(RunConfig &rc, const std::string &name, double value) {
  scenario::LandingConfig &lc = rc.landing;
  if (!std::isfinite(value)) Fail("parameter '" + name + "' must be finite");
  if (name == "inclination_deg" || name == "terrain_pitch_deg") {
    lc.terrain.pitch_rad = value * kDegToRad;
  } else if (name == "terrain_roll_deg") {
    lc.terrain.roll_rad = value * kDegToRad;
  } else if (name == "noise_mm") {
    lc.sensors.lidar_sigma_mm = value;
    lc.sensors.radar_sigma_mm = value;
  } else if (name == "lidar_sigma_mm") {
    lc.sensors.lidar_sigma_mm = value;
  } else if (name == "radar_sigma_mm") {
    lc.sensors.radar_sigma_mm = value;
  } else if (name == "dropout") {
    lc.sensors.lidar_dropout = value;
    lc.sensors.radar_dropout = value;
  } else if (name == "fault_start_step") {
    if (lc.faults.faults.empty()) {
      Fail("fault_start_step needs at least one entry in 'faults'");
    }
    if (value < 0) Fail("fault_start_step must be >= 0");
    for (auto &f : lc.faults.faults) {
      const uint64_t start = static_cast<uint64_t>(std::llround(value));
      if (f.end_step != 0) f.end_step = start + (f.end_step - f.start_step);
      f.start_step = start;
    }
  } else if (name == "initial_altitude_m") {
    lc.scenario.initial.altitude_m = value;
  } else if (name == "agreement_mm") {
    lc.core.fusion.agreement_mm = static_cast<int>(std::lround(value));
  } else if (name == "seed") {
    if (value < 0) Fail("seed must be >= 0");
    lc.seed = static_cast<uint64_t>(std::llround(value));
  } else {
    Fail("unknown sweep parameter '" + name + "'");
  }
}

void Validate(const RunConfig &rc) {
  scenario::Validate(rc.landing);
  if (!(rc.verify.golden_budget > 0.0) || !(rc.verify.sweep_budget > 0.0)) {
    Fail("verify budgets must be > 0");
  }
  if (rc.bench.cores < 0) Fail("bench.cores must be >= 0");
  if (!(rc.bench.clock_mhz >= 0.0)) Fail("bench.clock_mhz must be >= 0");
  // Also surfaces schedule errors (empty or oversized rule base) up front.
  try {
    systolic::BuildSchedule(rc.landing.engine, rc.bench.schedule);
  } catch (const Error &e) {
    Fail(e.what());
  }
  fls::FlsEngine probe(rc.landing.engine);
  (void)probe;
}

}  // namespace algas2::config
