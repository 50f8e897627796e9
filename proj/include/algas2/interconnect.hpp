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

#ifndef ALGAS2_INTERCONNECT_HPP_
#define ALGAS2_INTERCONNECT_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace algas2::interconnect {

inline constexpr int kNumCores = 4;

// Carries sensor-derived distance only. There is deliberately no command
// field: cores never exchange decisions.
struct NIMessage {
  uint8_t src_core = 0;               // 2-bit id
  uint16_t fused_distance_raw = 0;    // 11-bit, 1 cm LSB
  uint64_t seq = 0;                   // control step that produced it

  friend bool operator==(const NIMessage &, const NIMessage &) = default;
};

// Throws Error(kRange) if a field exceeds its bus width.
void Validate(const NIMessage &msg);

struct HubState {
  uint64_t tick = 0;
  uint32_t slot_counter = 0;  // serves NI (slot_counter mod 4)
  std::array<std::optional<NIMessage>, kNumCores> outbound;
  // mailbox[dst][src]: latest message from src delivered to dst.
  std::array<std::array<std::optional<NIMessage>, kNumCores>, kNumCores>
      mailbox;

  friend bool operator==(const HubState &, const HubState &) = default;
};

struct Broadcast {
  uint64_t tick = 0;
  int slot = 0;
  NIMessage msg;
  uint8_t delivered_mask = 0;  // bit d set when mailbox d accepted it
};

// Depth-1, freshest-wins: replaces any unsent message from the same source.
HubState NiPost(const HubState &hub, const NIMessage &msg);

struct TickResult {
  HubState hub;
  std::optional<Broadcast> broadcast;  // at most one per tick
};

TickResult HubTick(const HubState &hub);

struct Received {
  NIMessage msg;
  uint64_t staleness = 0;  // current_step - seq
};

// Up to three messages, ordered by source id. Entries newer than
// current_step report zero staleness.
std::vector<Received> NiCollect(const HubState &hub, int dst_core,
                                uint64_t current_step);

std::string HubTraceCsvHeader();
// Idle ticks are written with src "idle".
std::string HubTraceCsvRow(uint64_t tick, int slot,
                           const std::optional<Broadcast> &b);

}  // namespace algas2::interconnect

#endif  // ALGAS2_INTERCONNECT_HPP_
