#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "lospace/bigint.hpp"

namespace lospace {

// Binary floating point with an L-bit integer mantissa: value = mantissa * 2^exponent.
// Values are kept canonical (odd mantissa, or zero with exponent 0), so equal values
// compare equal structurally. When LOSPACE_TRACK_MERR is on, each value carries an
// upper bound on its multiplicative error relative to the exact computation.
class FloatL {
 public:
  FloatL() = default;

  static FloatL zero(int bits);
  static FloatL from_ratio(const BigInt& num, const BigInt& den, int bits);
  static FloatL from_int(const BigInt& value, int bits);
  // m * 2^e rounded to `bits` significant bits.
  static FloatL from_parts(const BigInt& mantissa, std::int64_t exponent, int bits);

  const BigInt& mantissa() const { return mantissa_; }
  std::int64_t exponent() const { return exponent_; }
  int bits() const { return bits_; }
  int sign() const { return sgn(mantissa_); }
  bool is_zero() const { return sgn(mantissa_) == 0; }

  // Tracked multiplicative error bound; 0 when tracking is compiled out.
  double merr() const;

  FloatL negated() const;
  // Exact multiplication by 2^k.
  FloatL times_pow2(std::int64_t k) const;

  Rational to_rational() const;
  double to_double() const;
  // "+m*2^e" form.
  std::string to_string() const;
  // Fixed decimal with `digits` digits after the point, rounded to nearest.
  std::string to_decimal(int digits) const;

  friend bool operator==(const FloatL& a, const FloatL& b) {
    return a.mantissa_ == b.mantissa_ && a.exponent_ == b.exponent_;
  }

 private:
  friend FloatL fl_add_same_sign(const FloatL& x, const FloatL& y);
  friend FloatL fl_mul(const FloatL& x, const FloatL& y);
  friend FloatL fl_recip(const FloatL& x);

  static FloatL make(BigInt mantissa, std::int64_t exponent, int bits, bool& inexact);
  void set_merr(double m);
  void check_range() const;

  BigInt mantissa_;
  std::int64_t exponent_ = 0;
  int bits_ = 64;
#ifdef LOSPACE_TRACK_MERR
  double merr_ = 0.0;
#endif
};

FloatL fl_add_same_sign(const FloatL& x, const FloatL& y);
FloatL fl_mul(const FloatL& x, const FloatL& y);
FloatL fl_recip(const FloatL& x);
std::strong_ordering fl_cmp(const FloatL& x, const FloatL& y);

// Unit roundoff 2^-bits as a double (0 when it underflows).
double unit_roundoff(int bits);

}  // namespace lospace
