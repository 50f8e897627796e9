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

#ifndef ALGAS2_SYSTOLIC_HPP_
#define ALGAS2_SYSTOLIC_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "algas2/fls.hpp"

namespace algas2::systolic {

enum class StageKind { kFuzzify, kRuleMin, kAccumulate, kDivide };

struct PipelineStage {
  std::string name;
  StageKind kind = StageKind::kFuzzify;
  int latency_cycles = 1;
  int parallel_ops = 0;  // arithmetic units busy every cycle in steady state
};

struct PipelineSchedule {
  std::vector<PipelineStage> stages;
  int initiation_interval = 1;
  int rules_per_mac = 3;  // rules folded into one multiply-add unit per cycle

  int depth() const;
};

struct ScheduleOptions {
  int fuzzify_latency = 2;
  int rule_min_latency = 1;
  int rules_per_mac = 3;
  int divider_latency = 4;
  int max_rules = 64;  // rule-unit budget
};

// One comparator-interpolator per membership function, one min unit per
// rule, ceil(rules / rules_per_mac) multiply-add units and one pipelined
// divider. Throws Error(kSchedule) for an empty rule base or one over budget.
PipelineSchedule BuildSchedule(const fls::FlsEngineConfig &config,
                               const ScheduleOptions &options = {});

int OpsPerCycle(const PipelineSchedule &schedule);

struct ThroughputReport {
  int ops_per_cycle_per_core = 0;
  int cores = 0;
  int system_ops_per_cycle = 0;
  double clock_mhz = 0.0;
  double gops = 0.0;
};

ThroughputReport SystemThroughput(const PipelineSchedule &schedule, int cores,
                                  double clock_mhz);

std::string ThroughputCsvHeader();
std::string ThroughputCsvRow(const ThroughputReport &report);
std::string ThroughputTable(const ThroughputReport &report);

struct PipelineResult {
  fls::QuantizedOutput output;
  uint64_t completion_cycle = 0;
};

// Cycle-level register model of one engine. Each Clock() advances every
// in-flight token by one position and runs that position's share of the
// datapath.
class SystolicPipeline {
 public:
  SystolicPipeline(const fls::FlsEngine &engine, PipelineSchedule schedule);

  // Presents `input` (or a bubble) at the pipeline entry for this cycle and
  // returns the result leaving the last register, if any.
  std::optional<PipelineResult> Clock(std::optional<fls::RawPair> input);

  uint64_t cycle() const { return cycle_; }
  bool empty() const;
  const PipelineSchedule &schedule() const { return schedule_; }

 private:
  struct Token {
    fls::RawPair crisp{};
    std::array<std::vector<int64_t>, fls::kNumInputs> degrees;
    std::vector<int64_t> strengths;
    fls::Accumulator acc;
    fls::QuantizedOutput out;
  };
  struct Slot {
    StageKind kind;
    int sub_cycle;
    int stage_latency;
  };

  void Process(Token &token, const Slot &slot) const;

  const fls::FlsEngine &engine_;
  PipelineSchedule schedule_;
  std::vector<Slot> slots_;
  std::vector<std::optional<Token>> regs_;
  uint64_t cycle_ = 0;
};

// Streams `inputs` at one input per initiation interval and drains the
// pipeline. Results come back in input order.
std::vector<PipelineResult> SimulatePipeline(
    const fls::FlsEngine &engine, const PipelineSchedule &schedule,
    std::span<const fls::RawPair> inputs);

}  // namespace algas2::systolic

#endif  // ALGAS2_SYSTOLIC_HPP_
