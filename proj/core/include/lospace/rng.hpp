#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "lospace/bigint.hpp"

namespace lospace {

// Seeded random stream. Sub-streams are derived from fixed labels so results do not
// depend on the order in which independent subroutines consume randomness.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t seed() const { return seed_; }
  Rng derive(std::string_view label) const;
  Rng derive(std::string_view label, std::uint64_t index) const;

  std::uint64_t next() { return engine_(); }
  // Uniform in [lo, hi].
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);
  BigInt uniform(const BigInt& lo, const BigInt& hi);
  // Uniform in [0, 1).
  double unit();
  // Standard normal via Box-Muller.
  double normal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lospace
