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

#include "algas2/fxp.hpp"

#include <cmath>
#include <limits>

#include "algas2/error.hpp"

namespace algas2::fxp {

double QFormat::lsb() const { return std::ldexp(1.0, -scale_pow2); }

std::string ToString(const QFormat &fmt) {
  return std::string(fmt.is_signed ? "s" : "u") +
         std::to_string(fmt.total_bits) + "." +
         std::to_string(fmt.scale_pow2);
}

void Validate(const QFormat &fmt) {
  if (!fmt.valid()) {
    throw Error(ErrorCode::kRange, "fixed-point width out of [2, 32]: " +
                                       ToString(fmt));
  }
  if (fmt.scale_pow2 < -32 || fmt.scale_pow2 > 48) {
    throw Error(ErrorCode::kRange,
                "fixed-point scale out of range: " + ToString(fmt));
  }
}

int64_t Saturate(int64_t raw, const QFormat &fmt) {
  if (raw < fmt.min_raw()) return fmt.min_raw();
  if (raw > fmt.max_raw()) return fmt.max_raw();
  return raw;
}

FxpValue::FxpValue(int64_t raw, QFormat fmt)
    : raw_(Saturate(raw, fmt)), fmt_(fmt) {}

double FxpValue::to_real() const {
  return std::ldexp(static_cast<double>(raw_), -fmt_.scale_pow2);
}

int64_t RoundHalfAway(double x) {
  // Clamp before the cast; anything this large saturates downstream anyway.
  constexpr double kLimit = 9.0e18;
  if (std::isnan(x)) return 0;
  if (x >= kLimit) return std::numeric_limits<int64_t>::max();
  if (x <= -kLimit) return std::numeric_limits<int64_t>::min();
  return static_cast<int64_t>(std::round(x));
}

int64_t ShiftRound(int64_t value, int shift) {
  if (shift <= 0) return value * (int64_t{1} << -shift);
  const int64_t half = int64_t{1} << (shift - 1);
  if (value >= 0) return (value + half) >> shift;
  return -((-value + half) >> shift);
}

FxpValue Quantize(double x, const QFormat &fmt) {
  return FxpValue(RoundHalfAway(std::ldexp(x, fmt.scale_pow2)), fmt);
}

double Dequantize(const FxpValue &v) { return v.to_real(); }

FxpValue SatAdd(const FxpValue &a, const FxpValue &b) {
  if (!(a.format() == b.format())) {
    throw Error(ErrorCode::kInvalidArgument,
                "sat_add format mismatch: " + ToString(a.format()) + " vs " +
                    ToString(b.format()));
  }
  return FxpValue(a.raw() + b.raw(), a.format());
}

FxpValue SatMul(const FxpValue &a, const FxpValue &b,
                const QFormat &result_fmt) {
  const int64_t product = a.raw() * b.raw();
  const int shift =
      a.format().scale_pow2 + b.format().scale_pow2 - result_fmt.scale_pow2;
  return FxpValue(ShiftRound(product, shift), result_fmt);
}

std::optional<int64_t> DivRound(int64_t num, int64_t den) {
  if (den == 0) return std::nullopt;
  if (den < 0) {
    throw Error(ErrorCode::kInvalidArgument, "div_round requires den > 0");
  }
  // floor((2 num + den) / (2 den)) with floor semantics for negative num.
  const int64_t n = 2 * num + den;
  const int64_t d = 2 * den;
  int64_t q = n / d;
  if ((n % d != 0) && (n < 0)) --q;
  return q;
}

}  // namespace algas2::fxp
