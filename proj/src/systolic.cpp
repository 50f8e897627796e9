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

#include "algas2/systolic.hpp"

#include <algorithm>
#include <sstream>

#include "algas2/error.hpp"
#include "text_util.hpp"

namespace algas2::systolic {

int PipelineSchedule::depth() const {
  int d = 0;
  for (const auto &s : stages) d += s.latency_cycles;
  return d;
}

PipelineSchedule BuildSchedule(const fls::FlsEngineConfig &config,
                               const ScheduleOptions &options) {
  const int rules = static_cast<int>(config.rules.size());
  if (rules == 0) {
    throw Error(ErrorCode::kSchedule, "schedule: empty rule base");
  }
  if (rules > options.max_rules) {
    throw Error(ErrorCode::kSchedule,
                "schedule: " + std::to_string(rules) +
                    " rules exceed the unit budget of " +
                    std::to_string(options.max_rules));
  }
  if (options.fuzzify_latency < 1 || options.rule_min_latency < 1 ||
      options.divider_latency < 1 || options.rules_per_mac < 1) {
    throw Error(ErrorCode::kSchedule, "schedule: latencies must be >= 1");
  }
  int mf_count = 0;
  for (const auto &in : config.inputs) {
    mf_count += static_cast<int>(in.mfs.size());
  }
  const int macs = (rules + options.rules_per_mac - 1) / options.rules_per_mac;

  PipelineSchedule s;
  s.initiation_interval = 1;
  s.rules_per_mac = options.rules_per_mac;
  s.stages = {
      {"fuzzify", StageKind::kFuzzify, options.fuzzify_latency, mf_count},
      {"rule_min", StageKind::kRuleMin, options.rule_min_latency, rules},
      // Each multiply-add unit owns one register of the chain, so the chain
      // length equals the unit count.
      {"accumulate", StageKind::kAccumulate, macs, macs},
      {"divide", StageKind::kDivide, options.divider_latency, 1},
  };
  return s;
}

int OpsPerCycle(const PipelineSchedule &schedule) {
  int ops = 0;
  for (const auto &s : schedule.stages) ops += s.parallel_ops;
  return ops;
}

ThroughputReport SystemThroughput(const PipelineSchedule &schedule, int cores,
                                  double clock_mhz) {
  ThroughputReport r;
  r.ops_per_cycle_per_core = OpsPerCycle(schedule);
  r.cores = cores;
  r.system_ops_per_cycle = r.ops_per_cycle_per_core * cores;
  r.clock_mhz = clock_mhz;
  r.gops = clock_mhz * 1e6 * r.system_ops_per_cycle / 1e9;
  return r;
}

std::string ThroughputCsvHeader() {
  return "ops_per_cycle_per_core,cores,system_ops_per_cycle,clock_mhz,gops";
}

std::string ThroughputCsvRow(const ThroughputReport &r) {
  std::ostringstream out;
  out << r.ops_per_cycle_per_core << ',' << r.cores << ','
      << r.system_ops_per_cycle << ',' << text::Fixed(r.clock_mhz, 2) << ','
      << text::Fixed(r.gops, 4);
  return out.str();
}

std::string ThroughputTable(const ThroughputReport &r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "  ops/cycle per core   %8d\n"
                "  cores                %8d\n"
                "  system ops/cycle     %8d\n"
                "  clock (MHz)          %8.2f\n"
                "  throughput (GOPS)    %8.2f\n",
                r.ops_per_cycle_per_core, r.cores, r.system_ops_per_cycle,
                r.clock_mhz, r.gops);
  return buf;
}

// ---------------------------------------------------------------------------

SystolicPipeline::SystolicPipeline(const fls::FlsEngine &engine,
                                   PipelineSchedule schedule)
    : engine_(engine), schedule_(std::move(schedule)) {
  for (const auto &stage : schedule_.stages) {
    for (int k = 0; k < stage.latency_cycles; ++k) {
      slots_.push_back({stage.kind, k, stage.latency_cycles});
    }
  }
  regs_.resize(slots_.size());
}

bool SystolicPipeline::empty() const {
  return std::none_of(regs_.begin(), regs_.end(),
                      [](const auto &r) { return r.has_value(); });
}

void SystolicPipeline::Process(Token &t, const Slot &slot) const {
  switch (slot.kind) {
    case StageKind::kFuzzify:
      // Input i is interpolated in sub-cycle min(i, latency - 1).
      for (int i = 0; i < fls::kNumInputs; ++i) {
        if (std::min(i, slot.stage_latency - 1) != slot.sub_cycle) continue;
        const int n = static_cast<int>(engine_.config().inputs[i].mfs.size());
        t.degrees[i].resize(n);
        for (int m = 0; m < n; ++m) {
          t.degrees[i][m] = engine_.DegreeOf(i, m, t.crisp[i]);
        }
      }
      break;
    case StageKind::kRuleMin:
      if (slot.sub_cycle == slot.stage_latency - 1) {
        t.strengths = engine_.InferStage(t.degrees);
      }
      break;
    case StageKind::kAccumulate: {
      const int first = slot.sub_cycle * schedule_.rules_per_mac;
      const int last =
          std::min(engine_.rule_count(), first + schedule_.rules_per_mac);
      if (first < last) engine_.AccumulateStage(t.strengths, first, last, t.acc);
      break;
    }
    case StageKind::kDivide:
      if (slot.sub_cycle == 0) {
        t.out = engine_.DivideStage(t.acc, engine_.initial_hold_raw());
      }
      break;
  }
}

std::optional<PipelineResult> SystolicPipeline::Clock(
    std::optional<fls::RawPair> input) {
  for (size_t p = regs_.size() - 1; p > 0; --p) regs_[p] = std::move(regs_[p - 1]);
  regs_[0].reset();
  if (input) {
    engine_.CheckInputs(*input);
    Token t;
    t.crisp = *input;
    regs_[0] = std::move(t);
  }
  for (size_t p = 0; p < regs_.size(); ++p) {
    if (regs_[p]) Process(*regs_[p], slots_[p]);
  }
  ++cycle_;
  auto &last = regs_.back();
  if (!last) return std::nullopt;
  PipelineResult r{last->out, cycle_};
  last.reset();
  return r;
}

std::vector<PipelineResult> SimulatePipeline(
    const fls::FlsEngine &engine, const PipelineSchedule &schedule,
    std::span<const fls::RawPair> inputs) {
  SystolicPipeline pipe(engine, schedule);
  std::vector<PipelineResult> out;
  out.reserve(inputs.size());
  size_t next = 0;
  const uint64_t ii = static_cast<uint64_t>(schedule.initiation_interval);
  while (next < inputs.size() || !pipe.empty()) {
    std::optional<fls::RawPair> in;
    if (next < inputs.size() && pipe.cycle() % ii == 0) in = inputs[next++];
    if (auto r = pipe.Clock(in)) out.push_back(*r);
  }
  return out;
}

}  // namespace algas2::systolic
