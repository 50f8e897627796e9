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

#ifndef ALGAS2_CORE_HPP_
#define ALGAS2_CORE_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "algas2/fls.hpp"
#include "algas2/interconnect.hpp"

namespace algas2::core {

using interconnect::kNumCores;

// Corner layout of the four cores.
enum Corner : int { kFrontLeft = 0, kFrontRight = 1, kRearLeft = 2, kRearRight = 3 };

// +1 for left/front corners, -1 for right/rear.
int RollSign(int core);
int PitchSign(int core);

enum class Health { kNominal, kLidarSuspect, kRadarSuspect, kDegraded };
enum class Confidence { kFull, kPartial, kNone };

const char *ToString(Health h);
const char *ToString(Confidence c);

struct HoaSample {
  uint32_t lidar_mm = 0;
  uint32_t radar_mm = 0;
  uint64_t step = 0;
  bool lidar_valid = true;
  bool radar_valid = true;
};

struct FusionParams {
  int agreement_mm = 200;
  int rate_window_steps = 40;  // backward-difference baseline
  // Consecutive agreeing samples before a suspect sensor is trusted again.
  int recovery_steps = 50;
  double dt_s = 0.001;
};

inline constexpr int kMaxRateWindow = 256;

struct SiuOutput {
  uint16_t fused_distance_raw = 0;  // u11, 1 cm LSB
  int16_t closure_rate_raw = 0;     // s10, 1 cm/s LSB, positive = closing
  Health health = Health::kNominal;
  int64_t fused_mm = 0;             // full-resolution fused distance
  // Suspicion latch carried into the next step.
  Health latched = Health::kNominal;
  int agree_streak = 0;
};

struct IicuEstimate {
  int32_t roll_mrad = 0;   // > 0: left side farther from the surface
  int32_t pitch_mrad = 0;  // > 0: front farther from the surface
  Confidence confidence = Confidence::kNone;

  friend bool operator==(const IicuEstimate &, const IicuEstimate &) = default;
};

struct Geometry {
  double half_span_x_m = 0.5;  // CG to front/rear corner row
  double half_span_y_m = 0.5;  // CG to left/right corner column
};

struct CoreParams {
  FusionParams fusion;
  Geometry geometry;
  double k_trim = 0.5;            // trim units per mrad
  int trim_limit = 511;
  int max_neighbor_staleness = 2; // steps
};

// Positive trim lowers this core's corner (less local thrust).
struct CoreCommand {
  uint8_t descent_code = 0;
  int32_t thrust_trim = 0;
  uint8_t source_core = 0;
  uint64_t step = 0;
  bool degraded = false;

  friend bool operator==(const CoreCommand &, const CoreCommand &) = default;
};

struct NeighborDistance {
  uint16_t distance_raw = 0;
  uint64_t seq = 0;

  friend bool operator==(const NeighborDistance &,
                         const NeighborDistance &) = default;
};

struct CoreState {
  // Ring of recent fused distances (mm), newest at head.
  std::array<int64_t, kMaxRateWindow + 1> history_mm{};
  int history_len = 0;
  int history_head = 0;
  int16_t prev_rate_raw = 0;
  Health suspect = Health::kNominal;  // latched suspect sensor, if any
  int agree_streak = 0;
  int64_t hold_raw = 0;
  uint8_t last_code = 0;
  int32_t last_trim = 0;
  std::array<std::optional<NeighborDistance>, kNumCores> neighbors;
  IicuEstimate iicu;

  static CoreState Initial(const fls::FlsEngine &engine);

  std::optional<int64_t> newest_mm() const;
  // Oldest retained sample within `window` steps and its age in steps.
  std::optional<std::pair<int64_t, int>> window_start(int window) const;
  void Push(int64_t mm);

  friend bool operator==(const CoreState &, const CoreState &) = default;
};

// Backward difference (previous - current) / dt, in cm/s, saturated to s10.
int16_t DeriveClosureRate(int64_t current_mm, int64_t previous_mm,
                          double dt_s);

// Returns nullopt on sensor blackout (neither reading valid).
std::optional<SiuOutput> SiuFuse(const HoaSample &sample,
                                 const CoreState &state,
                                 const FusionParams &params);

struct CornerDistance {
  int core = 0;
  uint16_t distance_raw = 0;
};

// Plane through the available corner distances (cm raw). Four corners use
// row/column means, three use the exact plane, fewer return `previous` with
// confidence NONE.
IicuEstimate IicuUpdate(std::span<const CornerDistance> distances,
                        const Geometry &geometry,
                        const IicuEstimate &previous);

// K * (roll_sign * roll + pitch_sign * pitch), zero without confidence.
int32_t ThrustTrim(int core, const IicuEstimate &estimate,
                   const CoreParams &params);

struct StepResult {
  CoreCommand command;
  std::optional<interconnect::NIMessage> outgoing;
  CoreState next;
};

// One independent decision step. The result is a function of the arguments
// only; nothing is shared between cores.
StepResult CoreStep(int core_id, const CoreState &state,
                    const std::optional<SiuOutput> &siu,
                    std::span<const interconnect::Received> inbox,
                    const fls::FlsEngine &engine, const CoreParams &params,
                    uint64_t step);

}  // namespace algas2::core

#endif  // ALGAS2_CORE_HPP_
