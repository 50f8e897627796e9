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

#ifndef ALGAS2_FXP_HPP_
#define ALGAS2_FXP_HPP_

#include <cstdint>
#include <optional>
#include <string>

namespace algas2::fxp {

// Two's-complement or unsigned fixed-point format. A raw integer r encodes
// the real value r / 2^scale_pow2.
struct QFormat {
  int total_bits = 8;
  bool is_signed = false;
  int scale_pow2 = 0;

  constexpr int64_t min_raw() const {
    return is_signed ? -(int64_t{1} << (total_bits - 1)) : 0;
  }
  constexpr int64_t max_raw() const {
    return is_signed ? (int64_t{1} << (total_bits - 1)) - 1
                     : (int64_t{1} << total_bits) - 1;
  }
  constexpr bool valid() const { return total_bits >= 2 && total_bits <= 32; }
  constexpr bool contains(int64_t raw) const {
    return raw >= min_raw() && raw <= max_raw();
  }
  // Weight of one raw step in real units.
  double lsb() const;

  friend constexpr bool operator==(const QFormat &,
                                   const QFormat &) = default;
};

inline constexpr QFormat Unsigned(int bits, int scale_pow2 = 0) {
  return QFormat{bits, false, scale_pow2};
}
inline constexpr QFormat Signed(int bits, int scale_pow2 = 0) {
  return QFormat{bits, true, scale_pow2};
}

std::string ToString(const QFormat &fmt);

// Throws Error(kRange) for an invalid format.
void Validate(const QFormat &fmt);

// A raw value paired with its format. Construction saturates, so raw() is
// always representable.
class FxpValue {
 public:
  FxpValue(int64_t raw, QFormat fmt);

  int64_t raw() const { return raw_; }
  const QFormat &format() const { return fmt_; }
  double to_real() const;

  friend bool operator==(const FxpValue &, const FxpValue &) = default;

 private:
  int64_t raw_;
  QFormat fmt_;
};

int64_t Saturate(int64_t raw, const QFormat &fmt);

// Round half away from zero of a real value.
int64_t RoundHalfAway(double x);

// Arithmetic shift right by `shift` bits rounding half away from zero.
// shift <= 0 shifts left.
int64_t ShiftRound(int64_t value, int shift);

FxpValue Quantize(double x, const QFormat &fmt);
double Dequantize(const FxpValue &v);

// Both operands must share a format; throws Error(kInvalidArgument)
// otherwise.
FxpValue SatAdd(const FxpValue &a, const FxpValue &b);

// Full-precision product rescaled to result_fmt (round half away), then
// saturated.
FxpValue SatMul(const FxpValue &a, const FxpValue &b,
                const QFormat &result_fmt);

// round-half-up(num / den). Returns nullopt when den == 0 (empty
// aggregation); den < 0 throws.
std::optional<int64_t> DivRound(int64_t num, int64_t den);

}  // namespace algas2::fxp

#endif  // ALGAS2_FXP_HPP_
