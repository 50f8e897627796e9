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

#include "algas2/interconnect.hpp"

#include "algas2/error.hpp"

namespace algas2::interconnect {

void Validate(const NIMessage &msg) {
  if (msg.src_core >= kNumCores) {
    throw Error(ErrorCode::kRange,
                "NI message source " + std::to_string(msg.src_core) +
                    " outside 0..3");
  }
  if (msg.fused_distance_raw > 2047) {
    throw Error(ErrorCode::kRange, "NI message distance exceeds 11 bits");
  }
}

HubState NiPost(const HubState &hub, const NIMessage &msg) {
  Validate(msg);
  HubState next = hub;
  next.outbound[msg.src_core] = msg;
  return next;
}

TickResult HubTick(const HubState &hub) {
  TickResult r{hub, std::nullopt};
  const int slot = static_cast<int>(hub.slot_counter % kNumCores);
  if (auto &pending = r.hub.outbound[slot]; pending) {
    Broadcast b{hub.tick, slot, *pending, 0};
    for (int dst = 0; dst < kNumCores; ++dst) {
      if (dst == slot) continue;
      auto &box = r.hub.mailbox[dst][slot];
      // A mailbox never regresses to an older sequence number.
      if (!box || box->seq <= pending->seq) {
        box = *pending;
        b.delivered_mask |= static_cast<uint8_t>(1u << dst);
      }
    }
    pending.reset();
    r.broadcast = b;
  }
  r.hub.slot_counter = (hub.slot_counter + 1) % kNumCores;
  ++r.hub.tick;
  return r;
}

std::vector<Received> NiCollect(const HubState &hub, int dst_core,
                                uint64_t current_step) {
  if (dst_core < 0 || dst_core >= kNumCores) {
    throw Error(ErrorCode::kRange, "NI collect: bad core id");
  }
  std::vector<Received> out;
  for (int src = 0; src < kNumCores; ++src) {
    const auto &box = hub.mailbox[dst_core][src];
    if (src == dst_core || !box) continue;
    out.push_back(
        {*box, current_step >= box->seq ? current_step - box->seq : 0});
  }
  return out;
}

std::string HubTraceCsvHeader() { return "tick,slot,src,seq,delivered"; }

std::string HubTraceCsvRow(uint64_t tick, int slot,
                           const std::optional<Broadcast> &b) {
  std::string row = std::to_string(tick) + "," + std::to_string(slot) + ",";
  if (!b) return row + "idle,,0";
  return row + std::to_string(b->msg.src_core) + "," +
         std::to_string(b->msg.seq) + "," + std::to_string(b->delivered_mask);
}

}  // namespace algas2::interconnect
