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

// Writes the shipped engine description and freezes the golden sample set
// from the real-valued reference evaluator.
//
//   gen_golden ENGINE_JSON GOLDEN_CSV

#include <array>
#include <cstdio>
#include <exception>
#include <vector>

#include "algas2/config.hpp"
#include "algas2/error.hpp"
#include "algas2/fls.hpp"

namespace {

// Distance (cm), closure rate (cm/s): spread over every MF overlap region,
// both rate signs and the saturated shoulders.
constexpr std::array<std::array<int, 2>, 12> kSamples = {{
    {40, -150},
    {96, 64},
    {180, 200},
    {256, 128},
    {330, -40},
    {450, 96},
    {600, 180},
    {700, 300},
    {900, 20},
    {1200, 240},
    {1650, 420},
    {2047, -512},
}};

}  // namespace

int main(int argc, char **argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: %s ENGINE_JSON GOLDEN_CSV\n", argv[0]);
    return 2;
  }
  try {
    using namespace algas2;
    const fls::FlsEngineConfig engine = fls::DefaultEngineConfig();
    fls::Validate(engine);
    config::StoreEngineConfig(argv[1], engine);

    std::vector<fls::GoldenInput> rows;
    for (const auto &s : kSamples) {
      fls::GoldenInput in;
      in.crisp = {s[0], s[1]};
      in.reference = fls::EvaluateReference(
                         engine, {static_cast<double>(s[0]),
                                  static_cast<double>(s[1])})
                         .value;
      rows.push_back(in);
    }
    fls::WriteGoldenCsv(argv[2], rows);
  } catch (const std::exception &e) {
    std::fprintf(stderr, "gen_golden: %s\n", e.what());
    return 1;
  }
  return 0;
}
