#include "lospace/primes.hpp"

#include <cmath>
#include <set>

#include "lospace/error.hpp"

namespace lospace {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

Primality test_prime(std::uint64_t x, int rounds, Rng& rng) {
  if (x < 2) throw Error(Errc::invalid_argument, "primality test below 2");
  if (x < 4) return Primality::prime;
  for (u64 q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
    if (x == q) return Primality::prime;
    if (x % q == 0) return Primality::composite;
  }
  u64 d = x - 1;
  int s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  for (int round = 0; round < rounds; ++round) {
    u64 a = x > 4 ? rng.uniform(2, x - 2) : 2;
    u64 y = powmod(a, d, x);
    if (y == 1 || y == x - 1) continue;
    bool witness = true;
    for (int i = 1; i < s && witness; ++i) {
      y = mulmod(y, y, x);
      if (y == x - 1) witness = false;
    }
    if (witness) return Primality::composite;
  }
  return Primality::prime;
}

Primality test_prime(const BigInt& x, int rounds, Rng& rng) {
  if (x < 2) throw Error(Errc::invalid_argument, "primality test below 2");
  if (bit_length(x) <= 64) return test_prime(to_u64(x), rounds, rng);
  if (mpz_even_p(x.get_mpz_t())) return Primality::composite;
  BigInt xm1 = x - 1;
  std::size_t s = mpz_scan1(xm1.get_mpz_t(), 0);
  BigInt d = shift_right_floor(xm1, s);
  BigInt y;
  for (int round = 0; round < rounds; ++round) {
    BigInt a = rng.uniform(BigInt(2), BigInt(x - 2));
    mpz_powm(y.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), x.get_mpz_t());
    if (y == 1 || y == xm1) continue;
    bool witness = true;
    for (std::size_t i = 1; i < s && witness; ++i) {
      y = y * y % x;
      if (y == xm1) witness = false;
    }
    if (witness) return Primality::composite;
  }
  return Primality::prime;
}

std::uint64_t rejection_budget(const BigInt& n, double c) {
  double lg = std::log2(std::max(2.0, mpz_get_d(n.get_mpz_t())));
  return static_cast<std::uint64_t>(std::ceil(8.0 * (c + 2.0) * lg * lg));
}

std::vector<BigInt> sample_primes_in(std::size_t k, const BigInt& lo, const BigInt& hi, Rng& rng,
                                     const PrimeSamplingOptions& opts) {
  if (lo < 2 || hi < lo) throw Error(Errc::invalid_argument, "invalid prime range");
  std::uint64_t budget = rejection_budget(lo, opts.c);
  std::set<BigInt> drawn;
  std::vector<BigInt> out;
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    bool found = false;
    for (std::uint64_t t = 0; t < budget && !found; ++t) {
      BigInt candidate = rng.uniform(lo, hi);
      if (drawn.count(candidate)) continue;
      if (test_prime(candidate, opts.rounds, rng) == Primality::prime) {
        drawn.insert(candidate);
        out.push_back(candidate);
        found = true;
      }
    }
    if (!found) throw Error(Errc::sampling_exhausted, "prime rejection budget spent");
  }
  return out;
}

std::vector<BigInt> sample_primes(std::size_t k, const BigInt& n, Rng& rng, const PrimeSamplingOptions& opts) {
  if (n < 16) throw Error(Errc::invalid_argument, "prime range lower bound below 16");
  if (k < 1 || BigInt(static_cast<unsigned long>(k)) > n) throw Error(Errc::invalid_argument, "prime count out of range");
  return sample_primes_in(k, n, n * n, rng, opts);
}

PrimeRange field_prime_range(const BigInt& lower) {
  BigInt cap_lo = shift_left(BigInt(1), kFieldPrimeBits - 1);
  BigInt cap_hi = shift_left(BigInt(1), kFieldPrimeBits) - 1;
  BigInt lo = lower < 16 ? BigInt(16) : lower;
  if (lo > cap_lo) lo = cap_lo;
  BigInt hi = lo * lo;
  if (hi > cap_hi) hi = cap_hi;
  return {lo, hi};
}

void CrtAccumulator::add(const BigInt& prime, const BigInt& residue) {
  if (prime < 2 || residue < 0 || residue >= prime) throw Error(Errc::invalid_argument, "residue out of range");
  BigInt g;
  mpz_gcd(g.get_mpz_t(), modulus_.get_mpz_t(), prime.get_mpz_t());
  if (g != 1) throw Error(Errc::duplicate_prime, "moduli are not distinct primes");
  BigInt inv;
  BigInt mod_p = modulus_ % prime;
  mpz_invert(inv.get_mpz_t(), mod_p.get_mpz_t(), prime.get_mpz_t());
  BigInt t = floor_mod((residue - value_) * inv, prime);
  value_ += modulus_ * t;
  modulus_ *= prime;
}

CrtResult crt_combine(std::span<const CrtPair> system) {
  CrtAccumulator acc;
  for (const auto& pair : system) acc.add(pair.prime, pair.residue);
  return {acc.modulus(), acc.value()};
}

BigInt signed_representative(const BigInt& value, const BigInt& modulus) {
  BigInt r = floor_mod(value, modulus);
  if (2 * r > modulus) r -= modulus;
  return r;
}

}  // namespace lospace
