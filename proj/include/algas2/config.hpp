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

#ifndef ALGAS2_CONFIG_HPP_
#define ALGAS2_CONFIG_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "algas2/fls.hpp"
#include "algas2/scenario.hpp"
#include "algas2/systolic.hpp"

namespace algas2::config {

struct VerifyConfig {
  std::string golden_path;  // resolved against the config file directory
  double golden_budget = 0.03;
  double sweep_budget = 0.05;
};

struct BenchConfig {
  int cores = 4;
  double clock_mhz = 279.25;
  double expected_gops = 21.22;
  double tolerance = 0.01;
  systolic::ScheduleOptions schedule;
};

// One JSON document with a section per module. Relative file references
// are resolved against the directory of the document.
struct RunConfig {
  scenario::LandingConfig landing;
  VerifyConfig verify;
  BenchConfig bench;
};

// Engine description (inputs, membership functions, rules, widths).
fls::FlsEngineConfig EngineFromJson(std::string_view text);
std::string EngineToJson(const fls::FlsEngineConfig &engine);
fls::FlsEngineConfig LoadEngineConfig(const std::string &path);
void StoreEngineConfig(const std::string &path,
                       const fls::FlsEngineConfig &engine);

// Parse and fully validate; throws Error(kConfig) naming the offending key.
RunConfig ParseRunConfig(std::string_view text, const std::string &base_dir);
RunConfig LoadRunConfig(const std::string &path);
std::string RunConfigToJson(const RunConfig &config);

// Names accepted by ApplyParameter.
const std::vector<std::string> &SweepParameters();

// Sets one scalar knob (e.g. "inclination_deg", "noise_mm",
// "fault_start_step", "seed"); unknown names throw Error(kConfig).
void ApplyParameter(RunConfig &config, const std::string &name, double value);

// Runs every validation ParseRunConfig performs.
void Validate(const RunConfig &config);

}  // namespace algas2::config

#endif  // ALGAS2_CONFIG_HPP_
