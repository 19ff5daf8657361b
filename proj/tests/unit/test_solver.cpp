#include <cmath>
#include <random>

#include "doctest.h"
#include "lospace/error.hpp"
#include "lospace/rational_solver.hpp"
#include "lospace/workspace.hpp"
#include "test_support.hpp"

using namespace lospace;
using testing_support::Dense64;
using testing_support::multiplicatively_close;

namespace {

IntVector ints(std::initializer_list<long> values) {
  IntVector v;
  for (long x : values) v.emplace_back(x);
  return v;
}

FloatL fl(long v, int bits = 16) { return FloatL::from_int(BigInt(v), bits); }

void check_against_oracle(const Dense64& raw, const IntVector& b, double eps, const SolveOutcome& got) {
  auto want = oracle::oracle_solve_exact(oracle::to_dense_int(raw), b);
  REQUIRE(want.has_value());
  REQUIRE_FALSE(got.singular);
  REQUIRE(got.solution.size() == want->size());
  for (std::size_t i = 0; i < want->size(); ++i) {
    INFO("coordinate " << i << " got " << got.solution[i].to_string() << " want " << (*want)[i].get_str());
    REQUIRE(multiplicatively_close(got.solution[i], (*want)[i], eps));
  }
}

}  // namespace

TEST_CASE("determinant examples") {
  Rng rng(50);
  CHECK(determinant(SparseMatrix::identity(5), rng) == 1);
  CHECK(determinant(SparseMatrix::from_dense({{0, 1}, {1, 0}}), rng) == -1);
  CHECK(determinant(SparseMatrix::from_dense({{1, 1}, {1, 1}}), rng) == 0);
  std::mt19937_64 gen(51);
  Dense64 raw = testing_support::random_dense(gen, 6, 6, 9);
  CHECK(determinant(SparseMatrix::from_dense(raw), rng) == oracle::oracle_det_bareiss(oracle::to_dense_int(raw)));
}

TEST_CASE("determinant matches fraction-free elimination") {
  std::mt19937_64 gen(52);
  Rng rng(53);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t n = 1 + trial % 14;
    Dense64 raw = testing_support::random_dense(gen, n, n, trial % 3 == 0 ? 1 : 50);
    if (trial % 5 == 0 && n > 1) raw[n - 1] = raw[0];
    BigInt want = oracle::oracle_det_bareiss(oracle::to_dense_int(raw));
    REQUIRE(determinant(SparseMatrix::from_dense(raw), rng) == want);
  }
}

TEST_CASE("determinant is independent of the thread count") {
  std::mt19937_64 gen(54);
  Dense64 raw = testing_support::random_dense(gen, 12, 12, 30);
  SparseMatrix a = SparseMatrix::from_dense(raw);
  Rng r1(55), r2(55);
  DeterminantOptions par;
  par.threads = 3;
  BigInt serial = determinant(a, r1);
  CHECK(serial == determinant(a, r2, par));
  CHECK(serial == oracle::oracle_det_bareiss(oracle::to_dense_int(raw)));
}

TEST_CASE("digit_of_b examples") {
  CHECK(digit_of_b(BigInt(7), BigInt(3), 5, 0) == 1);
  CHECK(digit_of_b(BigInt(7), BigInt(3), 5, 1) == 4);
  CHECK(digit_of_b(BigInt(7), BigInt(3), 5, 2) == 0);
  CHECK(digit_of_b(BigInt(7), BigInt(3), 5, 9) == 0);
  // floor(-21 / 5) = -5, and -5 mod 5 = 0; floor(-21 / 25) = -1 -> 4.
  CHECK(digit_of_b(BigInt(-7), BigInt(3), 5, 1) == 0);
  CHECK(digit_of_b(BigInt(-7), BigInt(3), 5, 2) == 4);
}

TEST_CASE("digit_of_b recomposes b * det") {
  std::mt19937_64 gen(56);
  for (int trial = 0; trial < 1000; ++trial) {
    std::uint64_t p = trial % 2 ? 7 : 1000003;
    BigInt b = testing_support::uniform_int(gen, -1000000000, 1000000000);
    BigInt det = testing_support::uniform_int(gen, -100000, 100000);
    BigInt value = b * det;
    BigInt sum = 0, power = 1;
    std::size_t t = 0;
    while (power <= 4 * abs(value) + 1) {
      sum += from_u64(digit_of_b(b, det, p, t)) * power;
      power *= from_u64(p);
      ++t;
    }
    REQUIRE(floor_mod(sum - value, power) == 0);
  }
}

TEST_CASE("sign_combine") {
  CHECK(sign_combine(FloatL::zero(16), fl(24), true).is_zero());
  // Nonnegative value: the digit accumulator is the smaller one.
  CHECK(sign_combine(fl(3), fl(21), false) == fl(3));
  // p = 5, T = 2, digits (3, 4) encode 23 = 25 - 2, so the value is -2.
  CHECK(sign_combine(fl(23), fl(1), false) == fl(-2));
  CHECK(sign_combine(fl(12), fl(3), false) == fl(-4));
  // Exhaustive over p = 5, T = 2; 12 and -13 share an encoding, which resolves to -13.
  for (long v = -12; v <= 11; ++v) {
    long enc = v >= 0 ? v : 25 + v;
    long pos = 0, neg = 0, power = 1;
    bool zero = true;
    for (int i = 0; i < 2; ++i) {
      long d = enc / power % 5;
      zero = zero && d == 0;
      pos += d * power;
      neg += (4 - d) * power;
      power *= 5;
    }
    CHECK(sign_combine(fl(pos), fl(neg), zero) == fl(v));
  }
}

TEST_CASE("lin_solve examples") {
  Rng rng(57);
  IntVector b1 = ints({3, -5});
  SolveOutcome s1 = lin_solve(SparseMatrix::identity(2), b1, 0.5, rng);
  REQUIRE_FALSE(s1.singular);
  CHECK(s1.solution[0].to_rational() == 3);
  CHECK(s1.solution[1].to_rational() == -5);

  // The accumulators are exact here; the quotient still carries the requested width.
  IntVector b1x = ints({1});
  SolveOutcome s1x = lin_solve(SparseMatrix::from_dense({{3}}), b1x, 1e-9, rng);
  CHECK(multiplicatively_close(s1x.solution[0], mpq_class(1, 3), 1e-9));

  IntVector b2 = ints({1, 3});
  SolveOutcome s2 = lin_solve(SparseMatrix::from_dense({{2, 0}, {0, 4}}), b2, 1e-6, rng);
  REQUIRE_FALSE(s2.singular);
  CHECK(multiplicatively_close(s2.solution[0], mpq_class(1, 2), 1e-6));
  CHECK(multiplicatively_close(s2.solution[1], mpq_class(3, 4), 1e-6));

  IntVector b3 = ints({1, 2});
  CHECK(lin_solve(SparseMatrix::from_dense({{1, 1}, {1, 1}}), b3, 1e-3, rng).singular);

  std::mt19937_64 gen(58);
  Dense64 raw = testing_support::random_invertible(gen, 8, 10);
  IntVector big;
  for (int i = 0; i < 8; ++i) big.emplace_back(i % 2 ? -100000000 : 100000000);
  check_against_oracle(raw, big, 1e-6, lin_solve(SparseMatrix::from_dense(raw), big, 1e-6, rng));
}

TEST_CASE("lin_solve entry-wise accuracy against exact elimination") {
  std::mt19937_64 gen(59);
  Rng rng(60);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 2 + trial % 10;
    double eps = trial % 2 ? 1e-6 : 1e-2;
    Dense64 raw = testing_support::random_invertible(gen, n, 50);
    IntVector b = testing_support::random_vector(gen, n, trial % 3 ? 50 : 1000000000);
    check_against_oracle(raw, b, eps, lin_solve(SparseMatrix::from_dense(raw), b, eps, rng));
  }
}

TEST_CASE("lifting digits reconstruct det * A^-1 b exactly") {
  std::mt19937_64 gen(61);
  Rng rng(62);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 1 + trial % 10;
    std::int64_t bound = trial % 4 == 0 ? 3 : 50;
    Dense64 raw = testing_support::random_invertible(gen, n, bound);
    IntVector b = testing_support::random_vector(gen, n, trial % 5 ? bound : 1000000);
    auto dense = oracle::to_dense_int(raw);
    BigInt det = oracle::oracle_det_bareiss(dense);
    std::uint64_t p = trial % 2 ? 1000003 : 2147483647;
    if (floor_mod(det, from_u64(p)) == 0) continue;
    SparseMatrix a = SparseMatrix::from_dense(raw);
    SparseOperator op(a);
    LiftState state(op, b, det, p, 1e-6, rng.derive("lift", trial));
    std::size_t iterations = n + 2;
    IntVector sum(n, BigInt(0));
    BigInt power = 1;
    for (std::size_t i = 0; i < iterations; ++i) {
      const FpVector& digits = state.step();
      REQUIRE(state.residual_norm() <= state.residual_bound());
      for (std::size_t j = 0; j < n; ++j) {
        REQUIRE(digits[j] < p);
        sum[j] += from_u64(digits[j]) * power;
      }
      power *= from_u64(p);
    }
    auto x = oracle::oracle_solve_exact(dense, b);
    REQUIRE(x.has_value());
    for (std::size_t j = 0; j < n; ++j) {
      mpq_class scaled = (*x)[j] * det;
      REQUIRE(scaled.get_den() == 1);
      REQUIRE(floor_mod(sum[j] - scaled.get_num(), power) == 0);
    }
  }
}

TEST_CASE("exact zeros are preserved") {
  std::mt19937_64 gen(63);
  Rng rng(64);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 2 + trial % 8;
    Dense64 raw = testing_support::random_invertible(gen, n, 20);
    IntVector x = testing_support::random_vector(gen, n, 9);
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 2 == static_cast<std::size_t>(trial % 2)) x[i] = 0;
    }
    IntVector b(n, BigInt(0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) b[i] += raw[i][j] * x[j];
    }
    SolveOutcome got = lin_solve(SparseMatrix::from_dense(raw), b, 1e-6, rng);
    REQUIRE_FALSE(got.singular);
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(got.solution[i].is_zero() == (x[i] == 0));
      REQUIRE(got.solution[i].to_rational() == x[i]);
    }
  }
}

TEST_CASE("block count does not change the output") {
  std::mt19937_64 gen(65);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t n = 3 + trial % 6;
    Dense64 raw = testing_support::random_invertible(gen, n, 50);
    IntVector b = testing_support::random_vector(gen, n, 50);
    SparseMatrix a = SparseMatrix::from_dense(raw);
    SolveOptions one, many;
    one.blocks = 1;
    many.blocks = n;
    Rng r1(66 + trial), r2(66 + trial), r3(66 + trial);
    SolveOutcome x1 = lin_solve(a, b, 1e-9, r1, one);
    SolveOutcome xd = lin_solve(a, b, 1e-9, r2);
    SolveOutcome xn = lin_solve(a, b, 1e-9, r3, many);
    CHECK(xn.plan.blocks == n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(x1.solution[i].to_string() == xd.solution[i].to_string());
      CHECK(x1.solution[i].to_string() == xn.solution[i].to_string());
    }
  }
}

TEST_CASE("default block count") {
  CHECK(default_block_count(10, BigInt(50), 0.5) == 1);
  // log2(2^-40) / log2(2 * 4 * 2) = 40 / 4.
  CHECK(default_block_count(4, BigInt(2), std::ldexp(1.0, -40)) == 4);
  CHECK(default_block_count(100, BigInt(2), std::ldexp(1.0, -40)) == 5);
}

TEST_CASE("lin_solve working space grows like n log(nU)") {
  std::mt19937_64 gen(67);
  for (std::size_t n : {64u, 128u, 256u}) {
    SparseMatrix a = testing_support::banded_dominant(gen, n, 100);
    IntVector b = testing_support::random_vector(gen, n, 100);
    Rng rng(68);
    WorkspaceMeter meter;
    {
      MeterScope scope(meter);
      SolveOutcome out = lin_solve(a, b, std::ldexp(1.0, -20), rng);
      REQUIRE_FALSE(out.singular);
    }
    double scale = static_cast<double>(n) * std::log2(static_cast<double>(n) * 100.0);
    double ratio = static_cast<double>(meter.peak_bits()) / scale;
    MESSAGE("n=" << n << " peak_bits=" << meter.peak_bits() << " ratio=" << ratio);
    CHECK(meter.current_bits() == 0);
    CHECK(ratio <= 64.0);
  }
}

TEST_CASE("linear_regression examples") {
  Rng rng(69);
  IntVector b1 = ints({1, 3});
  SolveOutcome r1 = linear_regression(SparseMatrix::from_dense({{1}, {1}}), b1, 1e-6, rng);
  REQUIRE_FALSE(r1.singular);
  CHECK(r1.solution[0].to_rational() == 2);
  IntVector b2 = ints({4, -7, 9});
  SolveOutcome r2 = linear_regression(SparseMatrix::identity(3), b2, 1e-6, rng);
  for (std::size_t i = 0; i < 3; ++i) CHECK(r2.solution[i].to_rational() == b2[i]);
  IntVector b3 = ints({1, 2});
  CHECK(linear_regression(SparseMatrix::from_dense({{1}, {2}}), b3, 1e-6, rng).solution[0].to_rational() == 1);
  IntVector b4 = ints({1, 2, 3});
  CHECK(linear_regression(SparseMatrix::from_dense({{1, 2}, {2, 4}, {3, 6}}), b4, 1e-6, rng).singular);
}

TEST_CASE("linear_regression matches the normal equations") {
  std::mt19937_64 gen(70);
  Rng rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t d = 1 + trial % 5, n = d + trial % 4;
    Dense64 raw = testing_support::random_dense(gen, n, d, 20);
    Dense64 normal(d, std::vector<std::int64_t>(d, 0));
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < n; ++k) normal[i][j] += raw[k][i] * raw[k][j];
      }
    }
    if (oracle::oracle_det_bareiss(oracle::to_dense_int(normal)) == 0) continue;
    IntVector b = testing_support::random_vector(gen, n, 30);
    IntVector rhs(d, BigInt(0));
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t k = 0; k < n; ++k) rhs[i] += raw[k][i] * b[k];
    }
    check_against_oracle(normal, rhs, 1e-6, linear_regression(SparseMatrix::from_dense(raw), b, 1e-6, rng));
  }
}

TEST_CASE("input validation") {
  Rng rng(72);
  IntVector b = ints({1});
  CHECK_THROWS_AS(lin_solve(SparseMatrix::identity(2), b, 1e-3, rng), Error);
  IntVector b2 = ints({1, 1});
  CHECK_THROWS_AS(lin_solve(SparseMatrix::identity(2), b2, 2.0, rng), Error);
  CHECK_THROWS_AS(determinant(SparseMatrix(2, 3, {}), rng), Error);
}
