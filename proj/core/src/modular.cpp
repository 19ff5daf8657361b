#include "lospace/modular.hpp"

#include <bit>

#include "lospace/error.hpp"

namespace lospace {

Modulus::Modulus(std::uint64_t p) : p_(p), bits_(static_cast<int>(std::bit_width(p))) {
  if (p < 2 || p >= (std::uint64_t{1} << 62)) throw Error(Errc::invalid_argument, "modulus outside [2, 2^62)");
}

Modulus::Modulus(const BigInt& p) : Modulus(bit_length(p) <= 62 && p > 0 ? to_u64(p) : 0) {}

FpElem Modulus::pow(FpElem a, std::uint64_t e) const {
  FpElem r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

FpElem Modulus::inv(FpElem a) const {
  if (a == 0) throw Error(Errc::divide_by_zero, "inverse of zero residue");
  // Extended Euclid on signed 128-bit values.
  __int128 t = 0, new_t = 1, r = p_, new_r = a;
  while (new_r != 0) {
    __int128 q = r / new_r;
    __int128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw Error(Errc::invalid_argument, "residue not invertible");
  if (t < 0) t += p_;
  return static_cast<FpElem>(t);
}

FpElem Modulus::reduce(std::int64_t v) const {
  if (v >= 0) return static_cast<std::uint64_t>(v) % p_;
  std::uint64_t m = (~static_cast<std::uint64_t>(v) + 1) % p_;
  return m == 0 ? 0 : p_ - m;
}

FpElem poly_eval(const FpPoly& f, FpElem x, const Modulus& mod) {
  FpElem acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = mod.add(mod.mul(acc, x), *it);
  return acc;
}

}  // namespace lospace
