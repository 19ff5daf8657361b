#include "lospace/float.hpp"

#include <algorithm>
#include <cmath>

#include "lospace/error.hpp"

namespace lospace {

namespace {

std::size_t lowest_set_bit(const BigInt& x) { return mpz_scan1(x.get_mpz_t(), 0); }

// Rounds the non-negative magnitude to `bits` significant bits, half to even.
// Returns the shift applied; sets inexact when bits were discarded.
std::size_t round_magnitude(BigInt& mag, int bits, bool& inexact) {
  std::size_t len = bit_length(mag);
  if (len <= static_cast<std::size_t>(bits)) return 0;
  std::size_t shift = len - static_cast<std::size_t>(bits);
  std::size_t low = lowest_set_bit(mag);
  bool half = mpz_tstbit(mag.get_mpz_t(), shift - 1);
  BigInt q = shift_right_floor(mag, shift);
  if (low < shift) inexact = true;
  if (half && (low < shift - 1 || mpz_odd_p(q.get_mpz_t()))) q += 1;
  mag = q;
  return shift;
}

}  // namespace

double unit_roundoff(int bits) { return std::ldexp(1.0, -bits); }

FloatL FloatL::make(BigInt mantissa, std::int64_t exponent, int bits, bool& inexact) {
  if (bits < 2) throw Error(Errc::invalid_argument, "float width below 2 bits");
  FloatL r;
  r.bits_ = bits;
  int s = sgn(mantissa);
  if (s == 0) return r;
  BigInt mag = abs(mantissa);
  exponent += static_cast<std::int64_t>(round_magnitude(mag, bits, inexact));
  std::size_t tz = lowest_set_bit(mag);
  if (tz > 0) {
    mag = shift_right_floor(mag, tz);
    exponent += static_cast<std::int64_t>(tz);
  }
  r.mantissa_ = s < 0 ? BigInt(-mag) : mag;
  r.exponent_ = exponent;
  r.check_range();
  return r;
}

void FloatL::check_range() const {
  if (is_zero() || bits_ >= 62) return;
  std::int64_t limit = std::int64_t{1} << bits_;
  std::int64_t top = exponent_ + static_cast<std::int64_t>(bit_length(mantissa_)) - 1;
  if (top >= limit || top < -limit) throw Error(Errc::overflow, "value outside the L-bit float range");
}

void FloatL::set_merr([[maybe_unused]] double m) {
#ifdef LOSPACE_TRACK_MERR
  merr_ = m;
#endif
}

double FloatL::merr() const {
#ifdef LOSPACE_TRACK_MERR
  return merr_;
#else
  return 0.0;
#endif
}

FloatL FloatL::zero(int bits) {
  FloatL r;
  r.bits_ = bits;
  return r;
}

FloatL FloatL::from_parts(const BigInt& mantissa, std::int64_t exponent, int bits) {
  bool inexact = false;
  FloatL r = make(mantissa, exponent, bits, inexact);
  r.set_merr(inexact ? unit_roundoff(bits) : 0.0);
  return r;
}

FloatL FloatL::from_int(const BigInt& value, int bits) { return from_parts(value, 0, bits); }

FloatL FloatL::from_ratio(const BigInt& num, const BigInt& den, int bits) {
  if (sgn(den) == 0) throw Error(Errc::divide_by_zero, "zero denominator");
  if (sgn(num) == 0) return zero(bits);
  int s = sgn(num) * sgn(den);
  BigInt a = abs(num), b = abs(den);
  // Scale so the integer quotient has exactly `bits` bits, then round on the remainder.
  std::int64_t k = bits + static_cast<std::int64_t>(bit_length(b)) - static_cast<std::int64_t>(bit_length(a));
  BigInt q, r, n, d;
  for (int attempt = 0; attempt < 2; ++attempt) {
    n = k >= 0 ? shift_left(a, static_cast<std::size_t>(k)) : a;
    d = k >= 0 ? b : shift_left(b, static_cast<std::size_t>(-k));
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    if (bit_length(q) <= static_cast<std::size_t>(bits)) break;
    --k;
  }
  bool inexact = sgn(r) != 0;
  int c = cmp(BigInt(2 * r), d);
  if (c > 0 || (c == 0 && mpz_odd_p(q.get_mpz_t()))) q += 1;
  bool extra = false;
  FloatL out = make(s < 0 ? BigInt(-q) : q, -k, bits, extra);
  out.set_merr(inexact ? unit_roundoff(bits) : 0.0);
  return out;
}

FloatL FloatL::negated() const {
  FloatL r = *this;
  r.mantissa_ = -mantissa_;
  return r;
}

FloatL FloatL::times_pow2(std::int64_t k) const {
  FloatL r = *this;
  if (!is_zero()) {
    r.exponent_ += k;
    r.check_range();
  }
  return r;
}

Rational FloatL::to_rational() const {
  Rational q(mantissa_);
  if (exponent_ >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(exponent_));
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-exponent_));
  }
  return q;
}

double FloatL::to_double() const {
  if (is_zero()) return 0.0;
  long e = 0;
  double d = mpz_get_d_2exp(&e, mantissa_.get_mpz_t());
  return std::ldexp(d, static_cast<int>(std::clamp<std::int64_t>(e + exponent_, -100000, 100000)));
}

std::string FloatL::to_string() const {
  std::string out = sign() < 0 ? "-" : "+";
  out += BigInt(abs(mantissa_)).get_str(10);
  out += "*2^";
  out += std::to_string(exponent_);
  return out;
}

std::string FloatL::to_decimal(int digits) const {
  Rational q = to_rational();
  BigInt scale = pow_int(10, static_cast<unsigned long>(std::max(digits, 0)));
  q *= scale;
  // Round half away from zero.
  BigInt num = abs(q.get_num());
  const BigInt& den = q.get_den();
  BigInt r = floor_div(2 * num + den, 2 * den);
  std::string body = r.get_str(10);
  if (digits > 0) {
    if (body.size() <= static_cast<std::size_t>(digits)) {
      body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    }
    body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  }
  if (sign() < 0 && sgn(r) != 0) body.insert(0, "-");
  return body;
}

FloatL fl_add_same_sign(const FloatL& x, const FloatL& y) {
  if (x.sign() * y.sign() < 0) throw Error(Errc::sign_mismatch, "operands have opposite signs");
  int bits = std::max(x.bits(), y.bits());
  if (y.is_zero() || x.is_zero()) {
    FloatL r = y.is_zero() ? x : y;
    if (r.bits() == bits) return r;
    bool inexact = false;
    FloatL out = FloatL::make(r.mantissa(), r.exponent(), bits, inexact);
    out.set_merr(r.merr() + (inexact ? unit_roundoff(bits) : 0.0));
    return out;
  }
  std::int64_t top_x = x.exponent() + static_cast<std::int64_t>(bit_length(x.mantissa())) - 1;
  std::int64_t top_y = y.exponent() + static_cast<std::int64_t>(bit_length(y.mantissa())) - 1;
  const FloatL& big = top_x >= top_y ? x : y;
  const FloatL& small = top_x >= top_y ? y : x;
  std::int64_t top_big = std::max(top_x, top_y);
  std::int64_t top_small = std::min(top_x, top_y);
  BigInt sm = small.mantissa();
  std::int64_t se = small.exponent();
  // A summand far below the rounding position only matters as a sticky bit.
  std::int64_t floor_pos = top_big - bits - 3;
  if (top_small < floor_pos) {
    sm = small.sign();
    se = floor_pos;
  }
  std::int64_t e = std::min(big.exponent(), se);
  BigInt sum = shift_left(big.mantissa(), static_cast<std::size_t>(big.exponent() - e)) +
               shift_left(sm, static_cast<std::size_t>(se - e));
  bool inexact = false;
  FloatL out = FloatL::make(sum, e, bits, inexact);
  out.set_merr(std::max(x.merr(), y.merr()) + (inexact ? unit_roundoff(bits) : 0.0));
  return out;
}

FloatL fl_mul(const FloatL& x, const FloatL& y) {
  int bits = std::max(x.bits(), y.bits());
  bool inexact = false;
  FloatL out = FloatL::make(x.mantissa() * y.mantissa(), x.exponent() + y.exponent(), bits, inexact);
  out.set_merr(x.merr() + y.merr() + (inexact ? unit_roundoff(bits) : 0.0));
  return out;
}

FloatL fl_recip(const FloatL& x) {
  if (x.is_zero()) throw Error(Errc::divide_by_zero, "reciprocal of zero");
  FloatL r = FloatL::from_ratio(1, x.mantissa(), x.bits());
  r = r.times_pow2(-x.exponent());
  r.set_merr(x.merr() + r.merr());
  return r;
}

std::strong_ordering fl_cmp(const FloatL& x, const FloatL& y) {
  if (x.sign() != y.sign()) return x.sign() <=> y.sign();
  if (x.is_zero()) return std::strong_ordering::equal;
  std::int64_t tx = x.exponent() + static_cast<std::int64_t>(bit_length(x.mantissa()));
  std::int64_t ty = y.exponent() + static_cast<std::int64_t>(bit_length(y.mantissa()));
  std::strong_ordering mag = std::strong_ordering::equal;
  if (tx != ty) {
    mag = tx <=> ty;
  } else {
    std::int64_t e = std::min(x.exponent(), y.exponent());
    BigInt ax = shift_left(abs(x.mantissa()), static_cast<std::size_t>(x.exponent() - e));
    BigInt ay = shift_left(abs(y.mantissa()), static_cast<std::size_t>(y.exponent() - e));
    mag = cmp(ax, ay) <=> 0;
  }
  if (x.sign() > 0) return mag;
  return 0 <=> mag;
}

}  // namespace lospace
