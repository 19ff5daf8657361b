#pragma once

#include <compare>
#include <string>

#include "lospace/bigint.hpp"

namespace lospace {

// Fixed point: value = scaled / 2^frac_bits.
class FixedL {
 public:
  FixedL() = default;
  FixedL(BigInt scaled, int frac_bits) : scaled_(std::move(scaled)), frac_bits_(frac_bits) {}

  static FixedL from_int(const BigInt& value) { return FixedL(value, 0); }
  // Nearest representable, ties away from zero.
  static FixedL from_ratio(const BigInt& num, const BigInt& den, int frac_bits);
  static FixedL from_rational(const Rational& q, int frac_bits);
  static FixedL from_double(double value, int frac_bits);

  const BigInt& scaled() const { return scaled_; }
  int frac_bits() const { return frac_bits_; }
  int sign() const { return sgn(scaled_); }

  // Same value expressed with more fractional bits (exact).
  FixedL widened(int frac_bits) const;
  // Nearest value with fewer fractional bits.
  FixedL rounded(int frac_bits) const;
  FixedL half() const { return FixedL(scaled_, frac_bits_ + 1); }
  FixedL negated() const { return FixedL(-scaled_, frac_bits_); }

  Rational to_rational() const;
  double to_double() const;
  std::string to_decimal(int digits) const;

  friend FixedL operator+(const FixedL& a, const FixedL& b);
  friend FixedL operator-(const FixedL& a, const FixedL& b);
  friend std::strong_ordering operator<=>(const FixedL& a, const FixedL& b);
  friend bool operator==(const FixedL& a, const FixedL& b) { return (a <=> b) == 0; }

 private:
  BigInt scaled_;
  int frac_bits_ = 0;
};

// Rounds num/den to the nearest integer, ties away from zero.
BigInt round_div(const BigInt& num, const BigInt& den);

}  // namespace lospace
