#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lospace/bigint.hpp"

namespace lospace {

using FpElem = std::uint64_t;
using FpVector = std::vector<FpElem>;
// Coefficients lowest degree first.
using FpPoly = std::vector<FpElem>;

// Arithmetic modulo a word-sized prime below 2^62.
class Modulus {
 public:
  explicit Modulus(std::uint64_t p);
  explicit Modulus(const BigInt& p);

  std::uint64_t value() const { return p_; }
  // Storage charge for one residue.
  int elem_bits() const { return bits_; }

  FpElem add(FpElem a, FpElem b) const {
    FpElem s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  FpElem sub(FpElem a, FpElem b) const { return a >= b ? a - b : a + p_ - b; }
  FpElem neg(FpElem a) const { return a == 0 ? 0 : p_ - a; }
  FpElem mul(FpElem a, FpElem b) const {
    return static_cast<FpElem>(static_cast<unsigned __int128>(a) * b % p_);
  }
  FpElem pow(FpElem a, std::uint64_t e) const;
  // Inverse of a nonzero residue.
  FpElem inv(FpElem a) const;

  FpElem reduce(std::int64_t v) const;
  FpElem reduce(const BigInt& v) const { return floor_mod_u64(v, p_); }

 private:
  std::uint64_t p_;
  int bits_;
};

// Evaluates a polynomial at a point.
FpElem poly_eval(const FpPoly& f, FpElem x, const Modulus& mod);

}  // namespace lospace
