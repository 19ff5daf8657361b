#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace lospace {

using BigInt = mpz_class;
using Rational = mpq_class;

// Number of bits in |x|; zero has length 0.
inline std::size_t bit_length(const BigInt& x) {
  return sgn(x) == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2);
}

// Storage charge for a signed integer in bits (magnitude plus sign).
inline std::size_t storage_bits(const BigInt& x) { return bit_length(x) + 1; }

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline BigInt floor_mod(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline std::uint64_t floor_mod_u64(const BigInt& a, std::uint64_t m) {
  return mpz_fdiv_ui(a.get_mpz_t(), m);
}

inline BigInt pow_int(const BigInt& base, unsigned long exp) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

inline BigInt shift_left(const BigInt& x, std::size_t k) {
  BigInt r;
  mpz_mul_2exp(r.get_mpz_t(), x.get_mpz_t(), k);
  return r;
}

// Floor of x / 2^k.
inline BigInt shift_right_floor(const BigInt& x, std::size_t k) {
  BigInt r;
  mpz_fdiv_q_2exp(r.get_mpz_t(), x.get_mpz_t(), k);
  return r;
}

inline BigInt isqrt(const BigInt& x) {
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
  return r;
}

inline BigInt from_u64(std::uint64_t v) {
  BigInt r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return r;
}

inline BigInt from_i64(std::int64_t v) {
  BigInt r = from_u64(v < 0 ? ~static_cast<std::uint64_t>(v) + 1 : static_cast<std::uint64_t>(v));
  if (v < 0) r = -r;
  return r;
}

// Low 64 bits of |x|.
inline std::uint64_t to_u64(const BigInt& x) {
  std::uint64_t v = 0;
  std::size_t count = 0;
  if (sgn(x) == 0) return 0;
  BigInt low;
  mpz_tdiv_r_2exp(low.get_mpz_t(), x.get_mpz_t(), 64);
  mpz_export(&v, &count, -1, sizeof(v), 0, 0, low.get_mpz_t());
  return v;
}

inline std::string to_decimal(const BigInt& x) { return x.get_str(10); }

// Parses an optionally signed decimal integer; nullopt on malformed text.
std::optional<BigInt> parse_bigint(std::string_view text);

}  // namespace lospace
