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

#include "algas2/fls.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "algas2/error.hpp"
#include "text_util.hpp"

namespace algas2::fls {
namespace {

void ConfigError(const std::string &what) {
  throw Error(ErrorCode::kConfig, "fls config: " + what);
}

size_t ExpectedBreakpoints(MfKind kind) {
  return kind == MfKind::kTriangular ? 3 : 4;
}

// Triangles are trapezoids with a single-point plateau.
std::array<double, 4> AsTrapezoid(const MembershipFunction &mf) {
  const auto &p = mf.breakpoints;
  if (mf.kind == MfKind::kTriangular) return {p[0], p[1], p[1], p[2]};
  return {p[0], p[1], p[2], p[3]};
}

}  // namespace

std::map<std::string, fxp::QFormat> WidthTable::ToMap() const {
  return {{"mf_offset", mf_offset},   {"mf_slope", mf_slope},
          {"degree", degree},         {"strength", strength},
          {"consequent", consequent}, {"product", product},
          {"numerator", numerator},   {"denominator", denominator},
          {"output", output},         {"command", command},
          {"status", status}};
}

void WidthTable::Assign(const std::string &name, const fxp::QFormat &fmt) {
  fxp::QFormat *slot = nullptr;
  if (name == "mf_offset") slot = &mf_offset;
  else if (name == "mf_slope") slot = &mf_slope;
  else if (name == "degree") slot = &degree;
  else if (name == "strength") slot = &strength;
  else if (name == "consequent") slot = &consequent;
  else if (name == "product") slot = &product;
  else if (name == "numerator") slot = &numerator;
  else if (name == "denominator") slot = &denominator;
  else if (name == "output") slot = &output;
  else if (name == "command") slot = &command;
  else if (name == "status") slot = &status;
  if (slot == nullptr) ConfigError("unknown width-table signal '" + name + "'");
  *slot = fmt;
}

FlsEngineConfig DefaultEngineConfig() {
  FlsEngineConfig c;
  c.inputs[0] = InputSpec{
      "distance",
      fxp::Unsigned(11),
      "m",
      0.01,
      {{"NEAR", MfKind::kTriangular, {0, 0, 256}},
       {"MID", MfKind::kTriangular, {0, 256, 768}},
       {"FAR", MfKind::kTrapezoidal, {256, 768, 2047, 2047}}}};
  c.inputs[1] = InputSpec{
      "closure_rate",
      fxp::Signed(10),
      "m/s",
      0.01,
      {{"SLOW", MfKind::kTrapezoidal, {-512, -512, 0, 128}},
       {"OK", MfKind::kTriangular, {0, 128, 256}},
       {"FAST", MfKind::kTrapezoidal, {128, 256, 511, 511}}}};
  for (int d = 0; d < 3; ++d) {
    for (int r = 0; r < 3; ++r) {
      c.rules.push_back(Rule{{d, r}, 3 * d + r});
    }
  }
  // Rows: NEAR, MID, FAR. Columns: SLOW, OK, FAST. Code 128 is hover.
  c.consequents = {144, 60, 20,     //
                   175, 100, 40,    //
                   230, 170, 100};
  c.initial_hold_code = 0;
  return c;
}

void Validate(const FlsEngineConfig &config) {
  static constexpr std::array<int, kNumInputs> kInputBits = {11, 10};
  for (int i = 0; i < kNumInputs; ++i) {
    const InputSpec &in = config.inputs[i];
    if (in.format.total_bits != kInputBits[i]) {
      ConfigError("input " + std::to_string(i) + " must be " +
                  std::to_string(kInputBits[i]) + "-bit, got " +
                  fxp::ToString(in.format));
    }
    if (in.format.scale_pow2 != 0) {
      ConfigError("input " + std::to_string(i) + " must be integer-scaled");
    }
    if (in.mfs.empty()) {
      ConfigError("input " + std::to_string(i) + " has no membership functions");
    }
    for (const auto &mf : in.mfs) {
      if (mf.breakpoints.size() != ExpectedBreakpoints(mf.kind)) {
        ConfigError("membership function '" + mf.name +
                    "' has wrong breakpoint count");
      }
      for (size_t k = 0; k < mf.breakpoints.size(); ++k) {
        if (!std::isfinite(mf.breakpoints[k])) {
          ConfigError("membership function '" + mf.name +
                      "' has a non-finite breakpoint");
        }
        if (k > 0 && mf.breakpoints[k] < mf.breakpoints[k - 1]) {
          ConfigError("membership function '" + mf.name +
                      "' breakpoints must be non-decreasing");
        }
      }
    }
  }
  if (config.rules.empty()) ConfigError("rule base is empty");
  std::array<std::vector<bool>, kNumInputs> referenced;
  for (int i = 0; i < kNumInputs; ++i) {
    referenced[i].assign(config.inputs[i].mfs.size(), false);
  }
  for (size_t r = 0; r < config.rules.size(); ++r) {
    const Rule &rule = config.rules[r];
    for (int i = 0; i < kNumInputs; ++i) {
      const int idx = rule.antecedents[i];
      if (idx < 0 || idx >= static_cast<int>(config.inputs[i].mfs.size())) {
        ConfigError("rule " + std::to_string(r) +
                    " antecedent index out of range");
      }
      referenced[i][idx] = true;
    }
    if (rule.consequent < 0 ||
        rule.consequent >= static_cast<int>(config.consequents.size())) {
      ConfigError("rule " + std::to_string(r) +
                  " consequent index out of range");
    }
  }
  for (int i = 0; i < kNumInputs; ++i) {
    for (size_t m = 0; m < referenced[i].size(); ++m) {
      if (!referenced[i][m]) {
        ConfigError("membership function '" + config.inputs[i].mfs[m].name +
                    "' is not referenced by any rule");
      }
    }
  }
  for (const auto &[name, fmt] : config.widths.ToMap()) {
    if (!fmt.valid()) ConfigError("width '" + name + "' out of [2, 32] bits");
  }
  for (int code : config.consequents) {
    if (!config.widths.consequent.contains(code)) {
      ConfigError("consequent code " + std::to_string(code) +
                  " outside consequent format");
    }
  }
  if (!config.widths.command.contains(config.initial_hold_code)) {
    ConfigError("initial hold code outside command format");
  }
}

// ---------------------------------------------------------------------------

double MembershipDegree(const MembershipFunction &mf, double x) {
  const auto [a, b, c, d] = AsTrapezoid(mf);
  if (x < a || x > d) return 0.0;
  if (x < b) return (x - a) / (b - a);
  if (x <= c) return 1.0;
  return (d - x) / (d - c);
}

DegreeMatrix Fuzzify(const FlsEngineConfig &config,
                     const std::array<double, kNumInputs> &crisp) {
  DegreeMatrix out;
  for (int i = 0; i < kNumInputs; ++i) {
    for (const auto &mf : config.inputs[i].mfs) {
      out[i].push_back(MembershipDegree(mf, crisp[i]));
    }
  }
  return out;
}

std::vector<double> Infer(const FlsEngineConfig &config,
                          const DegreeMatrix &degrees) {
  std::vector<double> strengths;
  strengths.reserve(config.rules.size());
  for (const Rule &rule : config.rules) {
    double s = 1.0;
    for (int i = 0; i < kNumInputs; ++i) {
      s = std::min(s, degrees[i][rule.antecedents[i]]);
    }
    strengths.push_back(s);
  }
  return strengths;
}

Defuzzified Defuzzify(const std::vector<double> &strengths,
                      const std::vector<double> &consequents,
                      double hold_value) {
  double num = 0.0;
  double den = 0.0;
  for (size_t r = 0; r < strengths.size(); ++r) {
    num += strengths[r] * consequents[r];
    den += strengths[r];
  }
  if (den == 0.0) return {hold_value, true};
  return {num / den, false};
}

Defuzzified EvaluateReference(const FlsEngineConfig &config,
                              const std::array<double, kNumInputs> &crisp,
                              double hold_value) {
  const auto strengths = Infer(config, Fuzzify(config, crisp));
  std::vector<double> consequents;
  consequents.reserve(config.rules.size());
  for (const Rule &rule : config.rules) {
    consequents.push_back(config.consequents[rule.consequent]);
  }
  return Defuzzify(strengths, consequents, hold_value);
}

Defuzzified EvaluateReference(const FlsEngineConfig &config,
                              const std::array<double, kNumInputs> &crisp) {
  return EvaluateReference(config, crisp, config.initial_hold_code);
}

// ---------------------------------------------------------------------------

FlsEngine::FlsEngine(FlsEngineConfig config) : config_(std::move(config)) {
  Validate(config_);
  const WidthTable &w = config_.widths;
  const double one = std::ldexp(1.0, w.degree.scale_pow2);
  auto slope_for = [&](int64_t span, const std::string &name) -> int64_t {
    if (span <= 0) return 0;
    const double slope = one / static_cast<double>(span);
    const fxp::FxpValue q = fxp::Quantize(slope, w.mf_slope);
    if (q.to_real() + w.mf_slope.lsb() < slope) {
      ConfigError("membership function '" + name +
                  "' edge too steep for slope format " +
                  fxp::ToString(w.mf_slope));
    }
    return q.raw();
  };
  for (int i = 0; i < kNumInputs; ++i) {
    for (const auto &mf : config_.inputs[i].mfs) {
      const auto t = AsTrapezoid(mf);
      CompiledMf cm;
      cm.kind = mf.kind;
      for (int k = 0; k < 4; ++k) cm.bp[k] = fxp::RoundHalfAway(t[k]);
      cm.rise_slope = slope_for(cm.bp[1] - cm.bp[0], mf.name);
      cm.fall_slope = slope_for(cm.bp[3] - cm.bp[2], mf.name);
      mfs_[i].push_back(cm);
    }
  }
  for (const Rule &rule : config_.rules) {
    consequent_raw_.push_back(config_.consequents[rule.consequent]);
  }
}

void FlsEngine::CheckInputs(const RawPair &crisp) const {
  for (int i = 0; i < kNumInputs; ++i) {
    if (!config_.inputs[i].format.contains(crisp[i])) {
      throw Error(ErrorCode::kRange,
                  "input " + std::to_string(i) + " raw value " +
                      std::to_string(crisp[i]) + " outside " +
                      fxp::ToString(config_.inputs[i].format));
    }
  }
}

int64_t FlsEngine::DegreeOf(int input, int mf, int64_t x) const {
  const WidthTable &w = config_.widths;
  const CompiledMf &m = mfs_[input][mf];
  const int64_t one = int64_t{1} << w.degree.scale_pow2;
  const auto &[a, b, c, d] = m.bp;
  int64_t deg;
  if (x < a || x > d) {
    deg = 0;
  } else if (x < b) {
    const int64_t offset = fxp::Saturate(x - a, w.mf_offset);
    deg = fxp::ShiftRound(offset * m.rise_slope, w.mf_slope.scale_pow2);
  } else if (x <= c) {
    deg = one;
  } else {
    const int64_t offset = fxp::Saturate(d - x, w.mf_offset);
    deg = fxp::ShiftRound(offset * m.fall_slope, w.mf_slope.scale_pow2);
  }
  return fxp::Saturate(std::clamp<int64_t>(deg, 0, one), w.degree);
}

std::array<std::vector<int64_t>, kNumInputs> FlsEngine::FuzzifyStage(
    const RawPair &crisp) const {
  std::array<std::vector<int64_t>, kNumInputs> out;
  for (int i = 0; i < kNumInputs; ++i) {
    out[i].resize(mfs_[i].size());
    for (size_t m = 0; m < mfs_[i].size(); ++m) {
      out[i][m] = DegreeOf(i, static_cast<int>(m), crisp[i]);
    }
  }
  return out;
}

std::vector<int64_t> FlsEngine::InferStage(
    const std::array<std::vector<int64_t>, kNumInputs> &degrees) const {
  const WidthTable &w = config_.widths;
  const int shift = w.degree.scale_pow2 - w.strength.scale_pow2;
  std::vector<int64_t> strengths(config_.rules.size());
  for (size_t r = 0; r < config_.rules.size(); ++r) {
    const Rule &rule = config_.rules[r];
    int64_t s = degrees[0][rule.antecedents[0]];
    for (int i = 1; i < kNumInputs; ++i) {
      s = std::min(s, degrees[i][rule.antecedents[i]]);
    }
    strengths[r] = fxp::Saturate(fxp::ShiftRound(s, shift), w.strength);
  }
  return strengths;
}

void FlsEngine::AccumulateStage(const std::vector<int64_t> &strengths,
                                int first, int last, Accumulator &acc) const {
  const WidthTable &w = config_.widths;
  for (int r = first; r < last; ++r) {
    const fxp::FxpValue product =
        fxp::SatMul(fxp::FxpValue(strengths[r], w.strength),
                    fxp::FxpValue(consequent_raw_[r], w.consequent), w.product);
    const int64_t term = fxp::ShiftRound(
        product.raw(), w.product.scale_pow2 - w.numerator.scale_pow2);
    acc.numerator = fxp::Saturate(acc.numerator + term, w.numerator);
    const int64_t weight = fxp::ShiftRound(
        strengths[r], w.strength.scale_pow2 - w.denominator.scale_pow2);
    acc.denominator = fxp::Saturate(acc.denominator + weight, w.denominator);
  }
}

QuantizedOutput FlsEngine::DivideStage(const Accumulator &acc,
                                       int64_t hold_raw) const {
  const WidthTable &w = config_.widths;
  if (acc.denominator == 0) return {hold_raw, true, false};
  const int k = w.output.scale_pow2 - w.numerator.scale_pow2 +
                w.denominator.scale_pow2;
  const int64_t num = k >= 0 ? acc.numerator * (int64_t{1} << k)
                             : acc.numerator;
  const int64_t den = k >= 0 ? acc.denominator
                             : acc.denominator * (int64_t{1} << -k);
  const int64_t q = *fxp::DivRound(num, den);
  const int64_t raw = fxp::Saturate(q, w.output);
  return {raw, false, raw != q};
}

QuantizedOutput FlsEngine::EvaluateQuantized(const RawPair &crisp,
                                             int64_t hold_raw) const {
  CheckInputs(crisp);
  const auto strengths = InferStage(FuzzifyStage(crisp));
  Accumulator acc;
  AccumulateStage(strengths, 0, rule_count(), acc);
  return DivideStage(acc, hold_raw);
}

QuantizedOutput FlsEngine::EvaluateQuantized(const RawPair &crisp) const {
  return EvaluateQuantized(crisp, initial_hold_raw());
}

double FlsEngine::OutputToReal(int64_t raw) const {
  return std::ldexp(static_cast<double>(raw),
                    -config_.widths.output.scale_pow2);
}

int64_t FlsEngine::CodeToOutputRaw(int code) const {
  return fxp::Saturate(
      fxp::ShiftRound(code, -config_.widths.output.scale_pow2),
      config_.widths.output);
}

int FlsEngine::OutputToCommand(int64_t raw) const {
  const int scale = config_.widths.output.scale_pow2;
  int64_t code;
  if (scale > 0) {
    code = *fxp::DivRound(raw, int64_t{1} << scale);
  } else {
    code = raw * (int64_t{1} << -scale);
  }
  return static_cast<int>(fxp::Saturate(code, config_.widths.command));
}

int64_t FlsEngine::initial_hold_raw() const {
  return CodeToOutputRaw(config_.initial_hold_code);
}

// ---------------------------------------------------------------------------

double RelativeError(double quantized, double reference, double floor) {
  return std::abs(quantized - reference) /
         std::max(std::abs(reference), floor);
}

GoldenReport CompareGolden(const FlsEngine &engine,
                           const std::vector<GoldenInput> &inputs) {
  GoldenReport report;
  for (const GoldenInput &in : inputs) {
    GoldenSample s;
    s.crisp = in.crisp;
    s.reference =
        in.reference.value_or(
            EvaluateReference(engine.config(),
                              {static_cast<double>(in.crisp[0]),
                               static_cast<double>(in.crisp[1])})
                .value);
    s.quantized_raw = engine.EvaluateQuantized(in.crisp).raw;
    s.quantized = engine.OutputToReal(s.quantized_raw);
    s.relative_error =
        RelativeError(s.quantized, s.reference, engine.ErrorFloor());
    report.max_relative_error =
        std::max(report.max_relative_error, s.relative_error);
    report.samples.push_back(s);
  }
  return report;
}

SweepReport FullSweep(const FlsEngine &engine) {
  const FlsEngineConfig &config = engine.config();
  const fxp::QFormat f0 = config.inputs[0].format;
  const fxp::QFormat f1 = config.inputs[1].format;

  // Reference degrees per input value, evaluated once per axis.
  auto table = [&](int input, const fxp::QFormat &f) {
    std::vector<std::vector<double>> t;
    for (int64_t x = f.min_raw(); x <= f.max_raw(); ++x) {
      std::vector<double> row;
      for (const auto &mf : config.inputs[input].mfs) {
        row.push_back(MembershipDegree(mf, static_cast<double>(x)));
      }
      t.push_back(std::move(row));
    }
    return t;
  };
  const auto deg0 = table(0, f0);
  const auto deg1 = table(1, f1);
  std::vector<double> consequents;
  for (const Rule &rule : config.rules) {
    consequents.push_back(config.consequents[rule.consequent]);
  }
  const double hold = config.initial_hold_code;

  SweepReport report;
  DegreeMatrix degrees;
  for (int64_t x0 = f0.min_raw(); x0 <= f0.max_raw(); ++x0) {
    degrees[0] = deg0[x0 - f0.min_raw()];
    for (int64_t x1 = f1.min_raw(); x1 <= f1.max_raw(); ++x1) {
      degrees[1] = deg1[x1 - f1.min_raw()];
      const double ref =
          Defuzzify(Infer(config, degrees), consequents, hold).value;
      const double q =
          engine.OutputToReal(engine.EvaluateQuantized({x0, x1}).raw);
      const double err = RelativeError(q, ref, engine.ErrorFloor());
      ++report.evaluations;
      if (err > report.max_relative_error) {
        report.max_relative_error = err;
        report.worst = {x0, x1};
        report.worst_reference = ref;
        report.worst_quantized = q;
      }
    }
  }
  return report;
}

std::vector<GoldenInput> ReadGoldenCsv(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open golden file: " + path);
  std::vector<GoldenInput> rows;
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = text::Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto fields = text::SplitCsv(trimmed);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() < 2 || fields[0] != "input0" || fields[1] != "input1") {
        throw Error(ErrorCode::kConfig,
                    path + ": expected header 'input0,input1[,reference]'");
      }
      continue;
    }
    if (fields.size() < 2 || fields.size() > 3) {
      throw Error(ErrorCode::kConfig,
                  path + ":" + std::to_string(line_no) + ": bad row");
    }
    GoldenInput g;
    try {
      g.crisp = {std::stoll(fields[0]), std::stoll(fields[1])};
      if (fields.size() == 3 && !fields[2].empty()) {
        g.reference = std::stod(fields[2]);
      }
    } catch (const std::exception &) {
      throw Error(ErrorCode::kConfig,
                  path + ":" + std::to_string(line_no) + ": bad number");
    }
    rows.push_back(g);
  }
  return rows;
}

void WriteGoldenCsv(const std::string &path,
                    const std::vector<GoldenInput> &rows) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write golden file: " + path);
  out << "input0,input1,reference\n";
  for (const auto &r : rows) {
    out << r.crisp[0] << ',' << r.crisp[1] << ','
        << (r.reference ? text::Fixed(*r.reference, 9) : "") << '\n';
  }
}

std::string GoldenReportCsv(const GoldenReport &report) {
  std::ostringstream out;
  out << "input0,input1,reference,quantized_raw,quantized,relative_error\n";
  for (const auto &s : report.samples) {
    out << s.crisp[0] << ',' << s.crisp[1] << ','
        << text::Fixed(s.reference, 6) << ',' << s.quantized_raw << ','
        << text::Fixed(s.quantized, 6) << ','
        << text::Fixed(s.relative_error, 6) << '\n';
  }
  return out.str();
}

}  // namespace algas2::fls
