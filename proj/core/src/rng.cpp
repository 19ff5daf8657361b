#include "lospace/rng.hpp"

#include <cmath>
#include <numbers>

#include "lospace/error.hpp"

namespace lospace {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_label(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix(seed)) {}

Rng Rng::derive(std::string_view label) const { return Rng(splitmix(seed_ ^ splitmix(hash_label(label)))); }

Rng Rng::derive(std::string_view label, std::uint64_t index) const {
  return Rng(splitmix(splitmix(seed_ ^ splitmix(hash_label(label))) + index));
}

std::uint64_t Rng::uniform(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) throw Error(Errc::invalid_argument, "empty range");
  std::uniform_int_distribution<std::uint64_t> dist(lo, hi);
  return dist(engine_);
}

BigInt Rng::uniform(const BigInt& lo, const BigInt& hi) {
  if (lo > hi) throw Error(Errc::invalid_argument, "empty range");
  BigInt span = hi - lo;
  if (span < BigInt(1) << 63) return lo + from_u64(uniform(0, to_u64(span)));
  std::size_t bits = bit_length(span);
  std::size_t words = (bits + 63) / 64;
  for (;;) {
    BigInt v = 0;
    for (std::size_t i = 0; i < words; ++i) v = shift_left(v, 64) + from_u64(next());
    v = shift_right_floor(v, words * 64 - bits);
    if (v <= span) return lo + v;
  }
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  while (u1 == 0.0) u1 = unit();
  double u2 = unit();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace lospace
