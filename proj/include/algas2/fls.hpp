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

#ifndef ALGAS2_FLS_HPP_
#define ALGAS2_FLS_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "algas2/fxp.hpp"

namespace algas2::fls {

inline constexpr int kNumInputs = 2;

enum class MfKind { kTriangular, kTrapezoidal };

// Piecewise-linear membership function. Breakpoints are in input LSB units
// (the crisp input's raw scale), non-decreasing: a <= b <= c for triangles
// and a <= b <= c <= d for trapezoids.
struct MembershipFunction {
  std::string name;
  MfKind kind = MfKind::kTriangular;
  std::vector<double> breakpoints;

  friend bool operator==(const MembershipFunction &,
                         const MembershipFunction &) = default;
};

struct InputSpec {
  std::string name;
  fxp::QFormat format;
  std::string unit;          // physical unit of one LSB, e.g. "cm"
  double unit_per_lsb = 1.0;
  std::vector<MembershipFunction> mfs;

  friend bool operator==(const InputSpec &, const InputSpec &) = default;
};

struct Rule {
  std::array<int, kNumInputs> antecedents{};
  int consequent = 0;

  friend bool operator==(const Rule &, const Rule &) = default;
};

// Formats of every internal signal of the quantized datapath.
struct WidthTable {
  fxp::QFormat mf_offset = fxp::Unsigned(11);
  // Rising/falling slope in degree LSBs per input LSB.
  fxp::QFormat mf_slope = fxp::Unsigned(15, 10);
  fxp::QFormat degree = fxp::Unsigned(9, 8);  // raw 256 == 1.0
  fxp::QFormat strength = fxp::Unsigned(9, 8);
  fxp::QFormat consequent = fxp::Unsigned(8);
  fxp::QFormat product = fxp::Unsigned(17, 8);
  // Widened past the 15-bit bus so a full 9-rule sum cannot overflow.
  fxp::QFormat numerator = fxp::Unsigned(20, 8);
  fxp::QFormat denominator = fxp::Unsigned(14, 8);
  fxp::QFormat output = fxp::Unsigned(9, 1);
  fxp::QFormat command = fxp::Unsigned(8);
  fxp::QFormat status = fxp::Unsigned(7);

  std::map<std::string, fxp::QFormat> ToMap() const;
  // Unknown names throw Error(kConfig); missing names keep their value.
  void Assign(const std::string &name, const fxp::QFormat &fmt);

  friend bool operator==(const WidthTable &, const WidthTable &) = default;
};

struct FlsEngineConfig {
  std::array<InputSpec, kNumInputs> inputs;
  std::vector<Rule> rules;
  std::vector<int> consequents;  // output codes, consequent format
  WidthTable widths;
  int initial_hold_code = 0;     // maximum braking

  friend bool operator==(const FlsEngineConfig &,
                         const FlsEngineConfig &) = default;
};

// Shipped default: distance {NEAR, MID, FAR} x closure rate {SLOW, OK,
// FAST}, 9-rule grid on the 8-bit descent-command axis.
FlsEngineConfig DefaultEngineConfig();

// Throws Error(kConfig) describing the first violated invariant.
void Validate(const FlsEngineConfig &config);

// ---------------------------------------------------------------------------
// Real-valued reference evaluator.

double MembershipDegree(const MembershipFunction &mf, double x);

using DegreeMatrix = std::array<std::vector<double>, kNumInputs>;

DegreeMatrix Fuzzify(const FlsEngineConfig &config,
                     const std::array<double, kNumInputs> &crisp);
std::vector<double> Infer(const FlsEngineConfig &config,
                          const DegreeMatrix &degrees);

struct Defuzzified {
  double value = 0.0;
  bool held = false;  // no rule fired; value is the hold value
};

Defuzzified Defuzzify(const std::vector<double> &strengths,
                      const std::vector<double> &consequents,
                      double hold_value);

// Output in consequent-code units.
Defuzzified EvaluateReference(const FlsEngineConfig &config,
                              const std::array<double, kNumInputs> &crisp,
                              double hold_value);
Defuzzified EvaluateReference(const FlsEngineConfig &config,
                              const std::array<double, kNumInputs> &crisp);

// ---------------------------------------------------------------------------
// Fixed-point evaluator.

using RawPair = std::array<int64_t, kNumInputs>;

struct QuantizedOutput {
  int64_t raw = 0;    // output format
  bool held = false;
  bool saturated = false;

  friend bool operator==(const QuantizedOutput &,
                         const QuantizedOutput &) = default;
};

// Running sums of the weighted-accumulate stage.
struct Accumulator {
  int64_t numerator = 0;
  int64_t denominator = 0;

  friend bool operator==(const Accumulator &, const Accumulator &) = default;
};

// Validated, integer-compiled engine. The stage methods are the building
// blocks both EvaluateQuantized and the systolic model run.
class FlsEngine {
 public:
  explicit FlsEngine(FlsEngineConfig config);

  const FlsEngineConfig &config() const { return config_; }
  const WidthTable &widths() const { return config_.widths; }
  int rule_count() const { return static_cast<int>(config_.rules.size()); }

  // Throws Error(kRange) if either raw input lies outside its format.
  void CheckInputs(const RawPair &crisp) const;

  std::array<std::vector<int64_t>, kNumInputs> FuzzifyStage(
      const RawPair &crisp) const;
  int64_t DegreeOf(int input, int mf, int64_t x) const;
  std::vector<int64_t> InferStage(
      const std::array<std::vector<int64_t>, kNumInputs> &degrees) const;
  // Adds rules [first, last) into acc.
  void AccumulateStage(const std::vector<int64_t> &strengths, int first,
                       int last, Accumulator &acc) const;
  QuantizedOutput DivideStage(const Accumulator &acc, int64_t hold_raw) const;

  QuantizedOutput EvaluateQuantized(const RawPair &crisp,
                                    int64_t hold_raw) const;
  QuantizedOutput EvaluateQuantized(const RawPair &crisp) const;

  // Output conversions.
  double OutputToReal(int64_t raw) const;
  int64_t CodeToOutputRaw(int code) const;
  // Final 8-bit command code from an output raw value (round half up,
  // saturated to the command format).
  int OutputToCommand(int64_t raw) const;
  int64_t initial_hold_raw() const;

  // Floor used in relative error: one output LSB.
  double ErrorFloor() const { return config_.widths.output.lsb(); }

 private:
  struct CompiledMf {
    MfKind kind;
    std::array<int64_t, 4> bp{};     // rounded breakpoints
    int64_t rise_slope = 0;          // mf_slope raw, 0 for a vertical edge
    int64_t fall_slope = 0;
  };

  FlsEngineConfig config_;
  std::array<std::vector<CompiledMf>, kNumInputs> mfs_;
  std::vector<int64_t> consequent_raw_;
};

// |quantized - reference| / max(|reference|, floor).
double RelativeError(double quantized, double reference, double floor);

struct GoldenSample {
  RawPair crisp{};
  double reference = 0.0;
  int64_t quantized_raw = 0;
  double quantized = 0.0;
  double relative_error = 0.0;
};

struct GoldenInput {
  RawPair crisp{};
  // Frozen reference output; when absent the live reference is used.
  std::optional<double> reference;
};

struct GoldenReport {
  std::vector<GoldenSample> samples;
  double max_relative_error = 0.0;
};

GoldenReport CompareGolden(const FlsEngine &engine,
                           const std::vector<GoldenInput> &inputs);

struct SweepReport {
  uint64_t evaluations = 0;
  double max_relative_error = 0.0;
  RawPair worst{};
  double worst_reference = 0.0;
  double worst_quantized = 0.0;
};

// Every representable input pair against the reference.
SweepReport FullSweep(const FlsEngine &engine);

// Golden table I/O: CSV with header "input0,input1,reference".
std::vector<GoldenInput> ReadGoldenCsv(const std::string &path);
void WriteGoldenCsv(const std::string &path,
                    const std::vector<GoldenInput> &rows);
std::string GoldenReportCsv(const GoldenReport &report);

}  // namespace algas2::fls

#endif  // ALGAS2_FLS_HPP_
