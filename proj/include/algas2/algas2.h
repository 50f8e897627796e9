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

/* C interface to the ALGAS2 landing-guidance library. All objects are
 * opaque handles released with their matching *_free function. Functions
 * return ALGAS2_OK or an error status; the message for the most recent
 * failure on the calling thread is available from algas2_last_error().
 *
 * Functions filling a caller buffer return the full length of the text
 * (excluding the terminator) and write at most cap - 1 characters, like
 * snprintf. */
#ifndef ALGAS2_ALGAS2_H_
#define ALGAS2_ALGAS2_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ALGAS2_API __declspec(dllexport)
#else
#define ALGAS2_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum algas2_status {
  ALGAS2_OK = 0,
  ALGAS2_E_INVALID_ARGUMENT = 1,
  ALGAS2_E_CONFIG = 2,
  ALGAS2_E_IO = 3,
  ALGAS2_E_RANGE = 4,
  ALGAS2_E_SCHEDULE = 5,
  ALGAS2_E_SIMULATION = 6,
  ALGAS2_E_INTERNAL = 99
} algas2_status;

typedef struct algas2_config algas2_config;
typedef struct algas2_engine algas2_engine;
typedef struct algas2_golden algas2_golden;
typedef struct algas2_run algas2_run;

ALGAS2_API const char *algas2_version(void);
ALGAS2_API const char *algas2_last_error(void);
ALGAS2_API const char *algas2_status_string(algas2_status status);

/* ---- Run configuration ------------------------------------------------ */

/* Built-in defaults (no golden file). */
ALGAS2_API algas2_status algas2_config_default(algas2_config **out);
/* Parses and validates a JSON run configuration. */
ALGAS2_API algas2_status algas2_config_load(const char *path,
                                            algas2_config **out);
ALGAS2_API algas2_status algas2_config_clone(const algas2_config *config,
                                             algas2_config **out);
ALGAS2_API void algas2_config_free(algas2_config *config);

ALGAS2_API algas2_status algas2_config_set_seed(algas2_config *config,
                                                uint64_t seed);
/* Sets a named scalar knob; see algas2_config_param_name(). */
ALGAS2_API algas2_status algas2_config_set_param(algas2_config *config,
                                                 const char *name,
                                                 double value);
ALGAS2_API size_t algas2_config_param_count(void);
ALGAS2_API const char *algas2_config_param_name(size_t index);

ALGAS2_API size_t algas2_config_golden_path(const algas2_config *config,
                                            char *buf, size_t cap);
ALGAS2_API size_t algas2_config_to_json(const algas2_config *config,
                                        char *buf, size_t cap);

typedef struct algas2_criteria {
  double golden_budget;
  double sweep_budget;
  int32_t bench_cores;
  double bench_clock_mhz;
  double bench_expected_gops;
  double bench_tolerance;
} algas2_criteria;

ALGAS2_API algas2_status algas2_config_criteria(const algas2_config *config,
                                                algas2_criteria *out);

/* ---- Fuzzy engine ----------------------------------------------------- */

ALGAS2_API algas2_status algas2_engine_create(const algas2_config *config,
                                              algas2_engine **out);
/* Loads a standalone engine description (JSON). */
ALGAS2_API algas2_status algas2_engine_load(const char *path,
                                            algas2_engine **out);
ALGAS2_API void algas2_engine_free(algas2_engine *engine);

typedef struct algas2_fls_output {
  int32_t raw;       /* output format raw value */
  double value;      /* raw in command-code units */
  int32_t command;   /* final 8-bit descent code */
  int32_t held;      /* no rule fired; hold value returned */
  int32_t saturated;
} algas2_fls_output;

/* Raw inputs: distance (11-bit, cm) and closure rate (10-bit signed, cm/s).
 * Out-of-format inputs fail with ALGAS2_E_RANGE. */
ALGAS2_API algas2_status algas2_engine_eval_quantized(
    const algas2_engine *engine, int32_t input0, int32_t input1,
    algas2_fls_output *out);
ALGAS2_API algas2_status algas2_engine_eval_reference(
    const algas2_engine *engine, double input0, double input1, double *out,
    int32_t *held);

typedef struct algas2_sweep_report {
  uint64_t evaluations;
  double max_relative_error;
  int32_t worst_input0;
  int32_t worst_input1;
  double worst_reference;
  double worst_quantized;
} algas2_sweep_report;

/* Quantized vs reference over every representable input pair. */
ALGAS2_API algas2_status algas2_engine_full_sweep(const algas2_engine *engine,
                                                  algas2_sweep_report *out);

/* ---- Golden samples ----------------------------------------------------- */

typedef struct algas2_golden_sample {
  int32_t input0;
  int32_t input1;
  double reference;
  int32_t quantized_raw;
  double quantized;
  double relative_error;
} algas2_golden_sample;

/* An empty golden file fails with ALGAS2_E_CONFIG. */
ALGAS2_API algas2_status algas2_golden_compare(const algas2_engine *engine,
                                               const char *golden_path,
                                               algas2_golden **out);
ALGAS2_API size_t algas2_golden_count(const algas2_golden *golden);
ALGAS2_API algas2_status algas2_golden_sample_at(const algas2_golden *golden,
                                                 size_t index,
                                                 algas2_golden_sample *out);
ALGAS2_API double algas2_golden_max_error(const algas2_golden *golden);
ALGAS2_API size_t algas2_golden_csv(const algas2_golden *golden, char *buf,
                                    size_t cap);
ALGAS2_API void algas2_golden_free(algas2_golden *golden);

/* ---- Systolic throughput ------------------------------------------------ */

typedef struct algas2_throughput {
  int32_t ops_per_cycle_per_core;
  int32_t cores;
  int32_t system_ops_per_cycle;
  double clock_mhz;
  double gops;
  int32_t pipeline_depth;
  int32_t initiation_interval;
} algas2_throughput;

ALGAS2_API algas2_status algas2_throughput_compute(
    const algas2_config *config, int32_t cores, double clock_mhz,
    algas2_throughput *out);
/* Header line plus one row. */
ALGAS2_API size_t algas2_throughput_csv(const algas2_throughput *report,
                                        char *buf, size_t cap);
ALGAS2_API size_t algas2_throughput_table(const algas2_throughput *report,
                                          char *buf, size_t cap);

/* Streams n pseudo-random inputs through the cycle model and compares each
 * result with the direct quantized evaluation. mismatches receives the
 * number of differing results, interval the steady-state spacing of
 * completions (0 if it was not constant). */
ALGAS2_API algas2_status algas2_pipeline_check(const algas2_config *config,
                                               uint32_t n, uint64_t seed,
                                               uint32_t *mismatches,
                                               uint32_t *interval);

/* ---- Landing simulation ------------------------------------------------- */

typedef struct algas2_landing_report {
  int32_t touchdown;
  double touchdown_speed_mps;
  double touchdown_inclination_error_deg;
  uint64_t steps_elapsed;
  int32_t success;
  int32_t degraded;
} algas2_landing_report;

ALGAS2_API algas2_status algas2_landing_run(const algas2_config *config,
                                            int32_t record_trace,
                                            algas2_run **out);
ALGAS2_API algas2_status algas2_run_report(const algas2_run *run,
                                           algas2_landing_report *out);
/* Writes trace.csv, core_trace.csv, hub_trace.csv and report.csv. */
ALGAS2_API algas2_status algas2_run_write_trace(const algas2_run *run,
                                                const char *dir);
ALGAS2_API size_t algas2_run_summary(const algas2_run *run, char *buf,
                                     size_t cap);
/* report.csv data row for this run. */
ALGAS2_API size_t algas2_run_csv_row(const algas2_run *run, char *buf,
                                     size_t cap);
ALGAS2_API void algas2_run_free(algas2_run *run);

ALGAS2_API size_t algas2_report_csv_header(char *buf, size_t cap);
ALGAS2_API size_t algas2_report_csv_row(const algas2_landing_report *report,
                                        char *buf, size_t cap);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* ALGAS2_ALGAS2_H_ */
