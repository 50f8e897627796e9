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

#include "algas2/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "algas2/error.hpp"
#include "algas2/fxp.hpp"

namespace algas2::core {
namespace {

constexpr int kHistorySize = kMaxRateWindow + 1;
constexpr fxp::QFormat kDistanceFormat = fxp::Unsigned(11);
constexpr fxp::QFormat kRateFormat = fxp::Signed(10);

}  // namespace

int RollSign(int core) {
  return (core == kFrontLeft || core == kRearLeft) ? 1 : -1;
}

int PitchSign(int core) {
  return (core == kFrontLeft || core == kFrontRight) ? 1 : -1;
}

const char *ToString(Health h) {
  switch (h) {
    case Health::kNominal: return "NOMINAL";
    case Health::kLidarSuspect: return "LIDAR_SUSPECT";
    case Health::kRadarSuspect: return "RADAR_SUSPECT";
    case Health::kDegraded: return "DEGRADED";
  }
  return "?";
}

const char *ToString(Confidence c) {
  switch (c) {
    case Confidence::kFull: return "FULL";
    case Confidence::kPartial: return "PARTIAL";
    case Confidence::kNone: return "NONE";
  }
  return "?";
}

CoreState CoreState::Initial(const fls::FlsEngine &engine) {
  CoreState s;
  s.hold_raw = engine.initial_hold_raw();
  s.last_code = static_cast<uint8_t>(engine.config().initial_hold_code);
  return s;
}

std::optional<int64_t> CoreState::newest_mm() const {
  if (history_len == 0) return std::nullopt;
  return history_mm[history_head];
}

std::optional<std::pair<int64_t, int>> CoreState::window_start(
    int window) const {
  if (history_len == 0 || window < 1) return std::nullopt;
  // A sample k entries behind the head is k + 1 steps older than the
  // sample about to be fused.
  const int back = std::min(window, history_len) - 1;
  const int idx = (history_head - back + kHistorySize) % kHistorySize;
  return std::make_pair(history_mm[idx], back + 1);
}

void CoreState::Push(int64_t mm) {
  history_head = (history_head + 1) % kHistorySize;
  history_mm[history_head] = mm;
  history_len = std::min(history_len + 1, kHistorySize);
}

int16_t DeriveClosureRate(int64_t current_mm, int64_t previous_mm,
                          double dt_s) {
  if (!(dt_s > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "closure rate needs dt > 0");
  }
  const double cm_per_s =
      static_cast<double>(previous_mm - current_mm) / dt_s / 10.0;
  return static_cast<int16_t>(
      fxp::Saturate(fxp::RoundHalfAway(cm_per_s), kRateFormat));
}

std::optional<SiuOutput> SiuFuse(const HoaSample &sample,
                                 const CoreState &state,
                                 const FusionParams &params) {
  if (!sample.lidar_valid && !sample.radar_valid) return std::nullopt;
  const int64_t lidar = sample.lidar_mm;
  const int64_t radar = sample.radar_mm;

  SiuOutput out;
  out.latched = state.suspect;
  if (sample.lidar_valid && sample.radar_valid) {
    if (std::llabs(lidar - radar) <= params.agreement_mm) {
      out.agree_streak = state.agree_streak + 1;
      if (state.suspect != Health::kNominal &&
          out.agree_streak < params.recovery_steps) {
        // Agreement alone does not clear a flagged sensor; keep using the
        // trusted one until the streak is long enough.
        out.fused_mm = state.suspect == Health::kLidarSuspect ? radar : lidar;
        out.health = state.suspect;
      } else {
        out.fused_mm = *fxp::DivRound(lidar + radar, 2);
        out.health = Health::kNominal;
        out.latched = Health::kNominal;
      }
    } else {
      bool take_lidar;
      if (const auto last = state.newest_mm()) {
        const double predicted =
            static_cast<double>(*last) -
            state.prev_rate_raw * 10.0 * params.dt_s;
        // Ties go to the radar.
        take_lidar = std::abs(lidar - predicted) < std::abs(radar - predicted);
      } else {
        // No history: trust the shorter reading (errs toward braking).
        take_lidar = lidar < radar;
      }
      out.fused_mm = take_lidar ? lidar : radar;
      out.health = take_lidar ? Health::kRadarSuspect : Health::kLidarSuspect;
      out.latched = out.health;
      out.agree_streak = 0;
    }
  } else {
    out.fused_mm = sample.lidar_valid ? lidar : radar;
    out.health = Health::kDegraded;
  }

  out.fused_distance_raw = static_cast<uint16_t>(
      fxp::Saturate(*fxp::DivRound(out.fused_mm, 10), kDistanceFormat));
  if (const auto start = state.window_start(params.rate_window_steps)) {
    out.closure_rate_raw = DeriveClosureRate(
        out.fused_mm, start->first, start->second * params.dt_s);
  }
  return out;
}

IicuEstimate IicuUpdate(std::span<const CornerDistance> distances,
                        const Geometry &geometry,
                        const IicuEstimate &previous) {
  if (!(geometry.half_span_x_m > 0.0) || !(geometry.half_span_y_m > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "IICU half-spans must be > 0");
  }
  std::array<std::optional<double>, kNumCores> d;
  for (const auto &cd : distances) {
    if (cd.core < 0 || cd.core >= kNumCores) {
      throw Error(ErrorCode::kRange, "IICU: bad corner id");
    }
    d[cd.core] = cd.distance_raw * 0.01;
  }
  const int n = static_cast<int>(
      std::count_if(d.begin(), d.end(), [](auto &v) { return v.has_value(); }));
  if (n < 3) return {previous.roll_mrad, previous.pitch_mrad, Confidence::kNone};

  const double lx = geometry.half_span_x_m;
  const double ly = geometry.half_span_y_m;
  double slope_x;  // d(distance)/dx, forward
  double slope_u;  // d(distance)/du, leftward
  Confidence confidence;
  if (n == 4) {
    slope_x = ((*d[kFrontLeft] + *d[kFrontRight]) / 2 -
               (*d[kRearLeft] + *d[kRearRight]) / 2) /
              (2 * lx);
    slope_u = ((*d[kFrontLeft] + *d[kRearLeft]) / 2 -
               (*d[kFrontRight] + *d[kRearRight]) / 2) /
              (2 * ly);
    confidence = Confidence::kFull;
  } else {
    // distance = c0 + slope_x * x + slope_u * u through three corners.
    std::array<std::array<double, 4>, 3> m;
    int row = 0;
    for (int c = 0; c < kNumCores; ++c) {
      if (!d[c]) continue;
      m[row++] = {1.0, PitchSign(c) * lx, RollSign(c) * ly, *d[c]};
    }
    auto det3 = [](double a, double b, double c, double d, double e, double f,
                   double g, double h, double i) {
      return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
    };
    const double det = det3(m[0][0], m[0][1], m[0][2], m[1][0], m[1][1],
                            m[1][2], m[2][0], m[2][1], m[2][2]);
    slope_x = det3(m[0][0], m[0][3], m[0][2], m[1][0], m[1][3], m[1][2],
                   m[2][0], m[2][3], m[2][2]) /
              det;
    slope_u = det3(m[0][0], m[0][1], m[0][3], m[1][0], m[1][1], m[1][3],
                   m[2][0], m[2][1], m[2][3]) /
              det;
    confidence = Confidence::kPartial;
  }
  return {static_cast<int32_t>(fxp::RoundHalfAway(std::atan(slope_u) * 1000)),
          static_cast<int32_t>(fxp::RoundHalfAway(std::atan(slope_x) * 1000)),
          confidence};
}

int32_t ThrustTrim(int core, const IicuEstimate &estimate,
                   const CoreParams &params) {
  // A held estimate would keep commanding a rotation that is no longer
  // observed, so trim is released without fresh geometry.
  if (estimate.confidence == Confidence::kNone) return 0;
  const double trim = params.k_trim * (RollSign(core) * estimate.roll_mrad +
                                       PitchSign(core) * estimate.pitch_mrad);
  return static_cast<int32_t>(std::clamp<int64_t>(
      fxp::RoundHalfAway(trim), -params.trim_limit, params.trim_limit));
}

StepResult CoreStep(int core_id, const CoreState &state,
                    const std::optional<SiuOutput> &siu,
                    std::span<const interconnect::Received> inbox,
                    const fls::FlsEngine &engine, const CoreParams &params,
                    uint64_t step) {
  if (core_id < 0 || core_id >= kNumCores) {
    throw Error(ErrorCode::kRange, "core id outside 0..3");
  }
  StepResult r{{}, std::nullopt, state};
  CoreState &next = r.next;
  for (const auto &rx : inbox) {
    const int src = rx.msg.src_core;
    if (src == core_id || src >= kNumCores) continue;
    auto &slot = next.neighbors[src];
    if (!slot || rx.msg.seq >= slot->seq) {
      slot = NeighborDistance{rx.msg.fused_distance_raw, rx.msg.seq};
    }
  }

  CoreCommand &cmd = r.command;
  cmd.source_core = static_cast<uint8_t>(core_id);
  cmd.step = step;
  std::vector<CornerDistance> corners;
  if (siu) {
    const fls::QuantizedOutput q = engine.EvaluateQuantized(
        {siu->fused_distance_raw, siu->closure_rate_raw}, state.hold_raw);
    if (!q.held) next.hold_raw = q.raw;
    cmd.descent_code = static_cast<uint8_t>(engine.OutputToCommand(q.raw));
    cmd.degraded = q.held || siu->health != Health::kNominal;
    next.Push(siu->fused_mm);
    next.prev_rate_raw = siu->closure_rate_raw;
    next.suspect = siu->latched;
    next.agree_streak = siu->agree_streak;
    r.outgoing = interconnect::NIMessage{static_cast<uint8_t>(core_id),
                                         siu->fused_distance_raw, step};
    corners.push_back({core_id, siu->fused_distance_raw});
  } else {
    cmd.descent_code = state.last_code;
    cmd.degraded = true;
  }
  for (int c = 0; c < kNumCores; ++c) {
    const auto &nb = next.neighbors[c];
    if (c == core_id || !nb || nb->seq > step) continue;
    if (step - nb->seq <= static_cast<uint64_t>(params.max_neighbor_staleness)) {
      corners.push_back({c, nb->distance_raw});
    }
  }
  next.iicu = IicuUpdate(corners, params.geometry, state.iicu);
  cmd.thrust_trim = ThrustTrim(core_id, next.iicu, params);
  next.last_code = cmd.descent_code;
  next.last_trim = cmd.thrust_trim;
  return r;
}

}  // namespace algas2::core
