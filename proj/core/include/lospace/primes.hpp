#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lospace/bigint.hpp"
#include "lospace/rng.hpp"

namespace lospace {

enum class Primality { prime, composite };

// Miller-Rabin with witnesses from the stream. Primes are never reported composite.
Primality test_prime(const BigInt& x, int rounds, Rng& rng);
Primality test_prime(std::uint64_t x, int rounds, Rng& rng);

struct PrimeSamplingOptions {
  double c = 2.0;   // failure probability exponent
  int rounds = 40;  // Miller-Rabin rounds per candidate
};

// Draws per prime before giving up: ceil(8 (c+2) log2(n)^2).
std::uint64_t rejection_budget(const BigInt& n, double c);

// k distinct primes, uniform in [n, n^2].
std::vector<BigInt> sample_primes(std::size_t k, const BigInt& n, Rng& rng, const PrimeSamplingOptions& opts = {});
// k distinct primes, uniform in [lo, hi]; the budget is computed from lo.
std::vector<BigInt> sample_primes_in(std::size_t k, const BigInt& lo, const BigInt& hi, Rng& rng,
                                     const PrimeSamplingOptions& opts = {});

// Primes used as word-sized field moduli stay below 2^62.
inline constexpr int kFieldPrimeBits = 62;

struct PrimeRange {
  BigInt lo;
  BigInt hi;
};

// [max(16, lower), max(16, lower)^2], clamped so hi < 2^62 and lo <= 2^61.
PrimeRange field_prime_range(const BigInt& lower);

struct CrtPair {
  BigInt prime;
  BigInt residue;
};

struct CrtResult {
  BigInt modulus;  // product of the primes
  BigInt value;    // 0 <= value < modulus
};

// Incremental (Garner-style) reconstruction; only the running product and value are kept.
class CrtAccumulator {
 public:
  void add(const BigInt& prime, const BigInt& residue);
  const BigInt& modulus() const { return modulus_; }
  const BigInt& value() const { return value_; }

 private:
  BigInt modulus_ = 1;
  BigInt value_ = 0;
};

CrtResult crt_combine(std::span<const CrtPair> system);

// Representative of value mod modulus in (-modulus/2, modulus/2].
BigInt signed_representative(const BigInt& value, const BigInt& modulus);

}  // namespace lospace
