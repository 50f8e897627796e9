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

#include "algas2/algas2.h"

#include <cstdio>
#include <cstring>
#include <exception>
#include <new>
#include <random>
#include <string>
#include <vector>

#include "algas2/config.hpp"
#include "algas2/error.hpp"
#include "algas2/fls.hpp"
#include "algas2/scenario.hpp"
#include "algas2/systolic.hpp"

struct algas2_config {
  algas2::config::RunConfig value;
};

struct algas2_engine {
  explicit algas2_engine(algas2::fls::FlsEngineConfig cfg)
      : engine(std::move(cfg)) {}
  algas2::fls::FlsEngine engine;
};

struct algas2_golden {
  algas2::fls::GoldenReport report;
};

struct algas2_run {
  algas2::scenario::LandingRun value;
};

namespace {

using algas2::Error;
using algas2::ErrorCode;

thread_local std::string g_last_error;

algas2_status StatusOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return ALGAS2_E_INVALID_ARGUMENT;
    case ErrorCode::kConfig:
      return ALGAS2_E_CONFIG;
    case ErrorCode::kIo:
      return ALGAS2_E_IO;
    case ErrorCode::kRange:
      return ALGAS2_E_RANGE;
    case ErrorCode::kSchedule:
      return ALGAS2_E_SCHEDULE;
    case ErrorCode::kSimulation:
      return ALGAS2_E_SIMULATION;
  }
  return ALGAS2_E_INTERNAL;
}

// Runs fn, translating exceptions into a status and the thread's last error.
template <typename Fn>
algas2_status Guard(Fn &&fn) {
  try {
    fn();
    g_last_error.clear();
    return ALGAS2_OK;
  } catch (const Error &e) {
    g_last_error = e.what();
    return StatusOf(e.code());
  } catch (const std::bad_alloc &) {
    g_last_error = "out of memory";
    return ALGAS2_E_INTERNAL;
  } catch (const std::exception &e) {
    g_last_error = e.what();
    return ALGAS2_E_INTERNAL;
  }
}

void Require(bool ok, const char *what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

size_t CopyOut(const std::string &text, char *buf, size_t cap) {
  if (buf != nullptr && cap > 0) {
    size_t n = text.size() < cap - 1 ? text.size() : cap - 1;
    std::memcpy(buf, text.data(), n);
    buf[n] = '\0';
  }
  return text.size();
}

algas2_throughput ToC(const algas2::systolic::ThroughputReport &r,
                      const algas2::systolic::PipelineSchedule &s) {
  algas2_throughput out{};
  out.ops_per_cycle_per_core = r.ops_per_cycle_per_core;
  out.cores = r.cores;
  out.system_ops_per_cycle = r.system_ops_per_cycle;
  out.clock_mhz = r.clock_mhz;
  out.gops = r.gops;
  out.pipeline_depth = s.depth();
  out.initiation_interval = s.initiation_interval;
  return out;
}

algas2::systolic::ThroughputReport FromC(const algas2_throughput &t) {
  algas2::systolic::ThroughputReport r;
  r.ops_per_cycle_per_core = t.ops_per_cycle_per_core;
  r.cores = t.cores;
  r.system_ops_per_cycle = t.system_ops_per_cycle;
  r.clock_mhz = t.clock_mhz;
  r.gops = t.gops;
  return r;
}

algas2::scenario::LandingReport FromC(const algas2_landing_report &c) {
  algas2::scenario::LandingReport r;
  r.touchdown = c.touchdown != 0;
  r.touchdown_speed_mps = c.touchdown_speed_mps;
  r.touchdown_inclination_error_rad =
      c.touchdown_inclination_error_deg * 3.14159265358979323846 / 180.0;
  r.steps_elapsed = c.steps_elapsed;
  r.success = c.success != 0;
  r.degraded = c.degraded != 0;
  return r;
}

}  // namespace

extern "C" {

const char *algas2_version(void) { return "1.0.0"; }

const char *algas2_last_error(void) { return g_last_error.c_str(); }

const char *algas2_status_string(algas2_status status) {
  switch (status) {
    case ALGAS2_OK:
      return "ok";
    case ALGAS2_E_INVALID_ARGUMENT:
      return "invalid argument";
    case ALGAS2_E_CONFIG:
      return "configuration error";
    case ALGAS2_E_IO:
      return "i/o error";
    case ALGAS2_E_RANGE:
      return "value out of range";
    case ALGAS2_E_SCHEDULE:
      return "schedule error";
    case ALGAS2_E_SIMULATION:
      return "simulation error";
    case ALGAS2_E_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

// ---- Run configuration ----------------------------------------------------

algas2_status algas2_config_default(algas2_config **out) {
  return Guard([&] {
    Require(out != nullptr, "out is null");
    *out = new algas2_config{};
  });
}

algas2_status algas2_config_load(const char *path, algas2_config **out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto cfg = algas2::config::LoadRunConfig(path);
    *out = new algas2_config{std::move(cfg)};
  });
}

algas2_status algas2_config_clone(const algas2_config *config,
                                  algas2_config **out) {
  return Guard([&] {
    Require(config != nullptr && out != nullptr, "null argument");
    *out = new algas2_config{config->value};
  });
}

void algas2_config_free(algas2_config *config) { delete config; }

algas2_status algas2_config_set_seed(algas2_config *config, uint64_t seed) {
  return Guard([&] {
    Require(config != nullptr, "config is null");
    config->value.landing.seed = seed;
  });
}

algas2_status algas2_config_set_param(algas2_config *config, const char *name,
                                      double value) {
  return Guard([&] {
    Require(config != nullptr && name != nullptr, "null argument");
    algas2::config::RunConfig next = config->value;
    algas2::config::ApplyParameter(next, name, value);
    algas2::config::Validate(next);
    config->value = std::move(next);
  });
}

size_t algas2_config_param_count(void) {
  return algas2::config::SweepParameters().size();
}

const char *algas2_config_param_name(size_t index) {
  const auto &names = algas2::config::SweepParameters();
  return index < names.size() ? names[index].c_str() : nullptr;
}

size_t algas2_config_golden_path(const algas2_config *config, char *buf,
                                 size_t cap) {
  if (config == nullptr) return CopyOut("", buf, cap);
  return CopyOut(config->value.verify.golden_path, buf, cap);
}

size_t algas2_config_to_json(const algas2_config *config, char *buf,
                             size_t cap) {
  if (config == nullptr) return CopyOut("", buf, cap);
  return CopyOut(algas2::config::RunConfigToJson(config->value), buf, cap);
}

algas2_status algas2_config_criteria(const algas2_config *config,
                                     algas2_criteria *out) {
  return Guard([&] {
    Require(config != nullptr && out != nullptr, "null argument");
    const auto &c = config->value;
    out->golden_budget = c.verify.golden_budget;
    out->sweep_budget = c.verify.sweep_budget;
    out->bench_cores = c.bench.cores;
    out->bench_clock_mhz = c.bench.clock_mhz;
    out->bench_expected_gops = c.bench.expected_gops;
    out->bench_tolerance = c.bench.tolerance;
  });
}

// ---- Fuzzy engine -----------------------------------------------------------

algas2_status algas2_engine_create(const algas2_config *config,
                                   algas2_engine **out) {
  return Guard([&] {
    Require(config != nullptr && out != nullptr, "null argument");
    *out = new algas2_engine(config->value.landing.engine);
  });
}

algas2_status algas2_engine_load(const char *path, algas2_engine **out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new algas2_engine(algas2::config::LoadEngineConfig(path));
  });
}

void algas2_engine_free(algas2_engine *engine) { delete engine; }

algas2_status algas2_engine_eval_quantized(const algas2_engine *engine,
                                           int32_t input0, int32_t input1,
                                           algas2_fls_output *out) {
  return Guard([&] {
    Require(engine != nullptr && out != nullptr, "null argument");
    auto q = engine->engine.EvaluateQuantized({input0, input1});
    out->raw = static_cast<int32_t>(q.raw);
    out->value = engine->engine.OutputToReal(q.raw);
    out->command = engine->engine.OutputToCommand(q.raw);
    out->held = q.held ? 1 : 0;
    out->saturated = q.saturated ? 1 : 0;
  });
}

algas2_status algas2_engine_eval_reference(const algas2_engine *engine,
                                           double input0, double input1,
                                           double *out, int32_t *held) {
  return Guard([&] {
    Require(engine != nullptr && out != nullptr, "null argument");
    auto d = algas2::fls::EvaluateReference(engine->engine.config(),
                                            {input0, input1});
    *out = d.value;
    if (held != nullptr) *held = d.held ? 1 : 0;
  });
}

algas2_status algas2_engine_full_sweep(const algas2_engine *engine,
                                       algas2_sweep_report *out) {
  return Guard([&] {
    Require(engine != nullptr && out != nullptr, "null argument");
    auto r = algas2::fls::FullSweep(engine->engine);
    out->evaluations = r.evaluations;
    out->max_relative_error = r.max_relative_error;
    out->worst_input0 = static_cast<int32_t>(r.worst[0]);
    out->worst_input1 = static_cast<int32_t>(r.worst[1]);
    out->worst_reference = r.worst_reference;
    out->worst_quantized = r.worst_quantized;
  });
}

// ---- Golden samples ---------------------------------------------------------

algas2_status algas2_golden_compare(const algas2_engine *engine,
                                    const char *golden_path,
                                    algas2_golden **out) {
  return Guard([&] {
    Require(engine != nullptr && golden_path != nullptr && out != nullptr,
            "null argument");
    *out = nullptr;
    auto rows = algas2::fls::ReadGoldenCsv(golden_path);
    if (rows.empty()) {
      throw Error(ErrorCode::kConfig,
                  std::string("golden file has no samples: ") + golden_path);
    }
    for (const auto &row : rows) engine->engine.CheckInputs(row.crisp);
    *out = new algas2_golden{algas2::fls::CompareGolden(engine->engine, rows)};
  });
}

size_t algas2_golden_count(const algas2_golden *golden) {
  return golden == nullptr ? 0 : golden->report.samples.size();
}

algas2_status algas2_golden_sample_at(const algas2_golden *golden,
                                      size_t index,
                                      algas2_golden_sample *out) {
  return Guard([&] {
    Require(golden != nullptr && out != nullptr, "null argument");
    if (index >= golden->report.samples.size()) {
      throw Error(ErrorCode::kRange, "golden sample index out of range");
    }
    const auto &s = golden->report.samples[index];
    out->input0 = static_cast<int32_t>(s.crisp[0]);
    out->input1 = static_cast<int32_t>(s.crisp[1]);
    out->reference = s.reference;
    out->quantized_raw = static_cast<int32_t>(s.quantized_raw);
    out->quantized = s.quantized;
    out->relative_error = s.relative_error;
  });
}

double algas2_golden_max_error(const algas2_golden *golden) {
  return golden == nullptr ? 0.0 : golden->report.max_relative_error;
}

size_t algas2_golden_csv(const algas2_golden *golden, char *buf, size_t cap) {
  if (golden == nullptr) return CopyOut("", buf, cap);
  return CopyOut(algas2::fls::GoldenReportCsv(golden->report), buf, cap);
}

void algas2_golden_free(algas2_golden *golden) { delete golden; }

// ---- Systolic throughput ----------------------------------------------------

algas2_status algas2_throughput_compute(const algas2_config *config,
                                        int32_t cores, double clock_mhz,
                                        algas2_throughput *out) {
  return Guard([&] {
    Require(config != nullptr && out != nullptr, "null argument");
    if (cores < 1) throw Error(ErrorCode::kInvalidArgument, "cores < 1");
    if (!(clock_mhz > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "clock must be positive");
    }
    auto schedule = algas2::systolic::BuildSchedule(
        config->value.landing.engine, config->value.bench.schedule);
    *out = ToC(algas2::systolic::SystemThroughput(schedule, cores, clock_mhz),
               schedule);
  });
}

size_t algas2_throughput_csv(const algas2_throughput *report, char *buf,
                             size_t cap) {
  if (report == nullptr) return CopyOut("", buf, cap);
  return CopyOut(algas2::systolic::ThroughputCsvHeader() + "\n" +
                     algas2::systolic::ThroughputCsvRow(FromC(*report)) +
                     "\n",
                 buf, cap);
}

size_t algas2_throughput_table(const algas2_throughput *report, char *buf,
                               size_t cap) {
  if (report == nullptr) return CopyOut("", buf, cap);
  return CopyOut(algas2::systolic::ThroughputTable(FromC(*report)), buf, cap);
}

algas2_status algas2_pipeline_check(const algas2_config *config, uint32_t n,
                                    uint64_t seed, uint32_t *mismatches,
                                    uint32_t *interval) {
  return Guard([&] {
    Require(config != nullptr && mismatches != nullptr && interval != nullptr,
            "null argument");
    const auto &engine_cfg = config->value.landing.engine;
    algas2::fls::FlsEngine engine(engine_cfg);
    auto schedule = algas2::systolic::BuildSchedule(
        engine_cfg, config->value.bench.schedule);
    std::mt19937_64 rng(seed);
    const auto &f0 = engine_cfg.inputs[0].format;
    const auto &f1 = engine_cfg.inputs[1].format;
    std::uniform_int_distribution<int64_t> d0(f0.min_raw(), f0.max_raw());
    std::uniform_int_distribution<int64_t> d1(f1.min_raw(), f1.max_raw());
    std::vector<algas2::fls::RawPair> inputs(n);
    for (auto &in : inputs) in = {d0(rng), d1(rng)};
    auto results = algas2::systolic::SimulatePipeline(engine, schedule, inputs);
    uint32_t bad = 0;
    for (size_t i = 0; i < inputs.size(); ++i) {
      if (!(results[i].output == engine.EvaluateQuantized(inputs[i]))) ++bad;
    }
    uint32_t spacing = 0;
    if (results.size() >= 2) {
      uint64_t first =
          results[1].completion_cycle - results[0].completion_cycle;
      bool constant = true;
      for (size_t i = 2; i < results.size(); ++i) {
        if (results[i].completion_cycle - results[i - 1].completion_cycle !=
            first) {
          constant = false;
        }
      }
      spacing = constant ? static_cast<uint32_t>(first) : 0;
    }
    *mismatches = bad;
    *interval = spacing;
  });
}

// ---- Landing simulation -----------------------------------------------------

algas2_status algas2_landing_run(const algas2_config *config,
                                 int32_t record_trace, algas2_run **out) {
  return Guard([&] {
    Require(config != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto landing = config->value.landing;
    landing.scenario.record_trace = record_trace != 0;
    *out = new algas2_run{algas2::scenario::RunLanding(landing)};
  });
}

algas2_status algas2_run_report(const algas2_run *run,
                                algas2_landing_report *out) {
  return Guard([&] {
    Require(run != nullptr && out != nullptr, "null argument");
    const auto &r = run->value.report;
    out->touchdown = r.touchdown ? 1 : 0;
    out->touchdown_speed_mps = r.touchdown_speed_mps;
    out->touchdown_inclination_error_deg =
        r.touchdown_inclination_error_rad * 180.0 / 3.14159265358979323846;
    out->steps_elapsed = r.steps_elapsed;
    out->success = r.success ? 1 : 0;
    out->degraded = r.degraded ? 1 : 0;
  });
}

algas2_status algas2_run_write_trace(const algas2_run *run, const char *dir) {
  return Guard([&] {
    Require(run != nullptr && dir != nullptr, "null argument");
    algas2::scenario::WriteTrace(run->value, dir);
  });
}

size_t algas2_run_summary(const algas2_run *run, char *buf, size_t cap) {
  if (run == nullptr) return CopyOut("", buf, cap);
  return CopyOut(algas2::scenario::ReportSummary(run->value.report), buf, cap);
}

size_t algas2_run_csv_row(const algas2_run *run, char *buf, size_t cap) {
  if (run == nullptr) return CopyOut("", buf, cap);
  return CopyOut(algas2::scenario::ReportCsvRow(run->value.report), buf, cap);
}

void algas2_run_free(algas2_run *run) { delete run; }

size_t algas2_report_csv_header(char *buf, size_t cap) {
  return CopyOut(algas2::scenario::ReportCsvHeader(), buf, cap);
}

size_t algas2_report_csv_row(const algas2_landing_report *report, char *buf,
                             size_t cap) {
  if (report == nullptr) return CopyOut("", buf, cap);
  return CopyOut(algas2::scenario::ReportCsvRow(FromC(*report)), buf, cap);
}

}  // extern "C"
