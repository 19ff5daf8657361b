#include "lospace/fixed.hpp"

#include <algorithm>
#include <cmath>

#include "lospace/error.hpp"
#include "lospace/float.hpp"

namespace lospace {

BigInt round_div(const BigInt& num, const BigInt& den) {
  if (sgn(den) == 0) throw Error(Errc::divide_by_zero, "zero denominator");
  BigInt n = abs(num), d = abs(den);
  BigInt q = floor_div(2 * n + d, 2 * d);
  return sgn(num) * sgn(den) < 0 ? BigInt(-q) : q;
}

FixedL FixedL::from_ratio(const BigInt& num, const BigInt& den, int frac_bits) {
  return FixedL(round_div(shift_left(num, static_cast<std::size_t>(frac_bits)), den), frac_bits);
}

FixedL FixedL::from_rational(const Rational& q, int frac_bits) {
  return from_ratio(q.get_num(), q.get_den(), frac_bits);
}

FixedL FixedL::from_double(double value, int frac_bits) {
  if (!std::isfinite(value)) throw Error(Errc::invalid_argument, "non-finite value");
  return from_rational(Rational(value), frac_bits);
}

FixedL FixedL::widened(int frac_bits) const {
  if (frac_bits <= frac_bits_) return *this;
  return FixedL(shift_left(scaled_, static_cast<std::size_t>(frac_bits - frac_bits_)), frac_bits);
}

FixedL FixedL::rounded(int frac_bits) const {
  if (frac_bits >= frac_bits_) return widened(frac_bits);
  BigInt den = shift_left(BigInt(1), static_cast<std::size_t>(frac_bits_ - frac_bits));
  return FixedL(round_div(scaled_, den), frac_bits);
}

Rational FixedL::to_rational() const {
  Rational q(scaled_);
  mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(frac_bits_));
  return q;
}

double FixedL::to_double() const { return FloatL::from_parts(scaled_, -frac_bits_, 64).to_double(); }

std::string FixedL::to_decimal(int digits) const {
  return FloatL::from_parts(scaled_, -frac_bits_, std::max<int>(static_cast<int>(bit_length(scaled_)), 2))
      .to_decimal(digits);
}

FixedL operator+(const FixedL& a, const FixedL& b) {
  int f = std::max(a.frac_bits_, b.frac_bits_);
  return FixedL(a.widened(f).scaled_ + b.widened(f).scaled_, f);
}

FixedL operator-(const FixedL& a, const FixedL& b) { return a + b.negated(); }

std::strong_ordering operator<=>(const FixedL& a, const FixedL& b) {
  int f = std::max(a.frac_bits_, b.frac_bits_);
  return cmp(a.widened(f).scaled_, b.widened(f).scaled_) <=> 0;
}

}  // namespace lospace
