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

// algas2: verify, bench, run and sweep front end over the C interface.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "algas2/algas2.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

// Thrown to unwind with a status from the library.
struct Failure {
  algas2_status status;
  std::string message;
};

void Check(algas2_status status, const std::string &what) {
  if (status != ALGAS2_OK) {
    throw Failure{status, what + ": " + algas2_last_error()};
  }
}

struct ConfigDeleter {
  void operator()(algas2_config *c) const { algas2_config_free(c); }
};
struct EngineDeleter {
  void operator()(algas2_engine *e) const { algas2_engine_free(e); }
};
struct GoldenDeleter {
  void operator()(algas2_golden *g) const { algas2_golden_free(g); }
};
struct RunDeleter {
  void operator()(algas2_run *r) const { algas2_run_free(r); }
};

using ConfigPtr = std::unique_ptr<algas2_config, ConfigDeleter>;
using EnginePtr = std::unique_ptr<algas2_engine, EngineDeleter>;
using GoldenPtr = std::unique_ptr<algas2_golden, GoldenDeleter>;
using RunPtr = std::unique_ptr<algas2_run, RunDeleter>;

// Copies text out of a snprintf-style C function.
template <typename Fn>
std::string Text(Fn &&fn) {
  std::string out(fn(nullptr, 0), '\0');
  if (!out.empty()) fn(out.data(), out.size() + 1);
  return out;
}

struct Globals {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::string out_dir;
};

ConfigPtr LoadConfig(const Globals &g) {
  algas2_config *raw = nullptr;
  if (g.config_path.empty()) {
    Check(algas2_config_default(&raw), "default config");
  } else {
    Check(algas2_config_load(g.config_path.c_str(), &raw), "config");
  }
  ConfigPtr cfg(raw);
  if (g.seed) Check(algas2_config_set_seed(cfg.get(), *g.seed), "seed");
  return cfg;
}

void EnsureDir(const std::string &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Failure{ALGAS2_E_IO, "cannot create " + dir};
}

void WriteFile(const std::string &dir, const std::string &name,
               const std::string &text) {
  EnsureDir(dir);
  std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Failure{ALGAS2_E_IO, "cannot write " + path};
}

std::string Format(const char *fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

// ---------------------------------------------------------------------------

int CmdVerify(const Globals &g, const std::string &golden_flag) {
  ConfigPtr cfg = LoadConfig(g);
  std::string golden = golden_flag;
  if (golden.empty()) {
    golden = Text([&](char *b, size_t n) {
      return algas2_config_golden_path(cfg.get(), b, n);
    });
  }
  if (golden.empty()) {
    throw Failure{ALGAS2_E_CONFIG,
                  "no golden file: pass --golden or set verify.golden"};
  }
  algas2_criteria crit{};
  Check(algas2_config_criteria(cfg.get(), &crit), "criteria");

  algas2_engine *eraw = nullptr;
  Check(algas2_engine_create(cfg.get(), &eraw), "engine");
  EnginePtr engine(eraw);
  algas2_golden *graw = nullptr;
  Check(algas2_golden_compare(engine.get(), golden.c_str(), &graw), "golden");
  GoldenPtr report(graw);

  algas2_sweep_report sweep{};
  Check(algas2_engine_full_sweep(engine.get(), &sweep), "sweep");

  std::string csv = Text([&](char *b, size_t n) {
    return algas2_golden_csv(report.get(), b, n);
  });
  std::cout << csv;

  double golden_max = algas2_golden_max_error(report.get());
  bool golden_ok = golden_max < crit.golden_budget;
  bool sweep_ok = sweep.max_relative_error <= crit.sweep_budget;
  std::ostringstream summary;
  summary << "golden samples:          " << algas2_golden_count(report.get())
          << "\n"
          << "golden max rel. error:   "
          << Format("%.6f", golden_max) << " (budget < "
          << Format("%.4f", crit.golden_budget) << ") "
          << (golden_ok ? "PASS" : "FAIL") << "\n"
          << "sweep evaluations:       " << sweep.evaluations << "\n"
          << "sweep max rel. error:    "
          << Format("%.6f", sweep.max_relative_error) << " (budget <= "
          << Format("%.4f", crit.sweep_budget) << ") "
          << (sweep_ok ? "PASS" : "FAIL") << "\n"
          << "sweep worst input:       (" << sweep.worst_input0 << ", "
          << sweep.worst_input1 << ") reference "
          << Format("%.6f", sweep.worst_reference) << " quantized "
          << Format("%.6f", sweep.worst_quantized) << "\n";
  std::cout << summary.str();
  if (!g.out_dir.empty()) WriteFile(g.out_dir, "golden_report.csv", csv);
  return golden_ok && sweep_ok ? kExitOk : kExitFailed;
}

int CmdBench(const Globals &g) {
  ConfigPtr cfg = LoadConfig(g);
  algas2_criteria crit{};
  Check(algas2_config_criteria(cfg.get(), &crit), "criteria");
  algas2_throughput tp{};
  Check(algas2_throughput_compute(cfg.get(), crit.bench_cores,
                                  crit.bench_clock_mhz, &tp),
        "throughput");
  std::string csv = Text([&](char *b, size_t n) {
    return algas2_throughput_csv(&tp, b, n);
  });
  std::string table = Text([&](char *b, size_t n) {
    return algas2_throughput_table(&tp, b, n);
  });
  std::cout << csv << "\n" << table;

  // Host timing varies run to run, so it goes to stderr.
  algas2_engine *eraw = nullptr;
  Check(algas2_engine_create(cfg.get(), &eraw), "engine");
  EnginePtr engine(eraw);
  const int kEvals = 1 << 20;
  algas2_fls_output out{};
  int64_t checksum = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < kEvals; ++i) {
    Check(algas2_engine_eval_quantized(engine.get(), i & 2047,
                                       ((i >> 11) & 1023) - 512, &out),
          "eval");
    checksum += out.raw;
  }
  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  std::cerr << "host quantized evaluations/s: "
            << Format("%.0f", secs > 0.0 ? kEvals / secs : 0.0)
            << " (checksum " << checksum << ")\n";

  bool ok = std::fabs(tp.gops - crit.bench_expected_gops) <=
            crit.bench_tolerance + 1e-9;
  std::cout << "expected gops:  " << Format("%.2f", crit.bench_expected_gops)
            << " +/- " << Format("%.2f", crit.bench_tolerance) << " "
            << (ok ? "PASS" : "FAIL") << "\n";
  if (!g.out_dir.empty()) WriteFile(g.out_dir, "throughput.csv", csv);
  return ok ? kExitOk : kExitFailed;
}

int CmdRun(const Globals &g, const std::string &trace_flag) {
  ConfigPtr cfg = LoadConfig(g);
  std::string trace = trace_flag.empty() ? g.out_dir : trace_flag;
  algas2_run *rraw = nullptr;
  Check(algas2_landing_run(cfg.get(), trace.empty() ? 0 : 1, &rraw), "run");
  RunPtr run(rraw);
  if (!trace.empty()) Check(algas2_run_write_trace(run.get(), trace.c_str()),
                            "trace");
  std::cout << Text([&](char *b, size_t n) {
    return algas2_run_summary(run.get(), b, n);
  });
  algas2_landing_report rep{};
  Check(algas2_run_report(run.get(), &rep), "report");
  return rep.success ? kExitOk : kExitFailed;
}

int CmdSweep(const Globals &g, const std::string &param, double from,
             double to, int steps) {
  if (steps < 1) throw Failure{ALGAS2_E_INVALID_ARGUMENT, "--steps must be >= 1"};
  ConfigPtr base = LoadConfig(g);

  // Build and validate every point before running anything.
  std::vector<double> values;
  std::vector<ConfigPtr> configs;
  for (int i = 0; i < steps; ++i) {
    double v = steps == 1 ? from : from + (to - from) * i / (steps - 1);
    algas2_config *raw = nullptr;
    Check(algas2_config_clone(base.get(), &raw), "config");
    ConfigPtr c(raw);
    Check(algas2_config_set_param(c.get(), param.c_str(), v), "sweep point");
    values.push_back(v);
    configs.push_back(std::move(c));
  }

  std::ostringstream csv;
  csv << "run,param,value,"
      << Text([](char *b, size_t n) { return algas2_report_csv_header(b, n); })
      << "\n";
  std::cout << csv.str() << std::flush;
  for (int i = 0; i < steps; ++i) {
    algas2_run *rraw = nullptr;
    Check(algas2_landing_run(configs[i].get(), 0, &rraw), "run");
    RunPtr run(rraw);
    std::ostringstream row;
    row << i << "," << param << "," << Format("%.6f", values[i]) << ","
        << Text([&](char *b, size_t n) {
             return algas2_run_csv_row(run.get(), b, n);
           })
        << "\n";
    std::cout << row.str() << std::flush;
    csv << row.str();
  }
  if (!g.out_dir.empty()) WriteFile(g.out_dir, "sweep.csv", csv.str());
  return kExitOk;
}

int ExitFor(algas2_status status) {
  return status == ALGAS2_E_SIMULATION || status == ALGAS2_E_INTERNAL
             ? kExitFailed
             : kExitUsage;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"ALGAS2 landing-guidance reconstruction"};
  app.fallthrough();
  app.require_subcommand(1);

  Globals g;
  uint64_t seed = 0;
  app.add_option("--config", g.config_path, "JSON run configuration")
      ->check(CLI::ExistingFile);
  auto *seed_opt = app.add_option("--seed", seed, "override the RNG seed");
  app.add_option("--out", g.out_dir, "directory for CSV outputs");

  std::string golden;
  auto *verify = app.add_subcommand(
      "verify", "golden-set and full-sweep accuracy of the quantized engine");
  verify->add_option("--golden", golden, "golden sample CSV");

  auto *bench = app.add_subcommand("bench", "systolic throughput model");

  std::string trace;
  auto *run = app.add_subcommand("run", "closed-loop landing simulation");
  run->add_option("--trace", trace, "directory for trace and report CSVs");

  std::string param;
  double from = 0.0, to = 0.0;
  int steps = 0;
  auto *sweep = app.add_subcommand("sweep", "landing runs over one parameter");
  sweep->add_option("--param", param, "parameter name")->required();
  sweep->add_option("--from", from, "first value")->required();
  sweep->add_option("--to", to, "last value")->required();
  sweep->add_option("--steps", steps, "number of runs")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  if (*seed_opt) g.seed = seed;

  try {
    if (*verify) return CmdVerify(g, golden);
    if (*bench) return CmdBench(g);
    if (*run) return CmdRun(g, trace);
    if (*sweep) return CmdSweep(g, param, from, to, steps);
  } catch (const Failure &f) {
    std::cerr << "algas2: " << f.message << "\n";
    return ExitFor(f.status);
  }
  return kExitUsage;
}
