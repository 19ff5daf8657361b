#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "lospace/float.hpp"
#include "lospace/sparse.hpp"
#include "oracle.hpp"

namespace testing_support {

using Dense64 = std::vector<std::vector<std::int64_t>>;

inline std::int64_t uniform_int(std::mt19937_64& gen, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen);
}

inline Dense64 random_dense(std::mt19937_64& gen, std::size_t rows, std::size_t cols, std::int64_t bound) {
  Dense64 a(rows, std::vector<std::int64_t>(cols));
  for (auto& row : a) {
    for (auto& v : row) v = uniform_int(gen, -bound, bound);
  }
  return a;
}

inline Dense64 random_symmetric(std::mt19937_64& gen, std::size_t n, std::int64_t bound) {
  Dense64 a(n, std::vector<std::int64_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) a[i][j] = a[j][i] = uniform_int(gen, -bound, bound);
  }
  return a;
}

inline Dense64 random_invertible(std::mt19937_64& gen, std::size_t n, std::int64_t bound) {
  for (;;) {
    Dense64 a = random_dense(gen, n, n, bound);
    if (oracle::oracle_det_bareiss(oracle::to_dense_int(a)) != 0) return a;
  }
}

inline std::vector<mpz_class> random_vector(std::mt19937_64& gen, std::size_t n, std::int64_t bound) {
  std::vector<mpz_class> v;
  for (std::size_t i = 0; i < n; ++i) v.emplace_back(static_cast<long>(uniform_int(gen, -bound, bound)));
  return v;
}

// Same sign and |got / want| within [e^-eps, e^eps]; zero matches only zero.
inline bool multiplicatively_close(const lospace::FloatL& got, const mpq_class& want, double eps) {
  int ws = sgn(want);
  if (got.sign() != ws) return false;
  if (ws == 0) return true;
  mpq_class ratio = got.to_rational() / want;
  return std::fabs(std::log(ratio.get_d())) <= eps;
}

// Tridiagonal plus a few random off-band entries, strictly diagonally dominant.
inline lospace::SparseMatrix banded_dominant(std::mt19937_64& gen, std::size_t n, std::int64_t bound) {
  std::vector<lospace::Entry> entries;
  std::vector<std::int64_t> row_sum(n, 0);
  auto put = [&](std::size_t i, std::size_t j, std::int64_t v) {
    if (v == 0) return;
    entries.push_back({i, j, v});
    row_sum[i] += v < 0 ? -v : v;
  };
  std::int64_t off = bound / 4;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) put(i, i - 1, uniform_int(gen, -off, off));
    if (i + 1 < n) put(i, i + 1, uniform_int(gen, -off, off));
    std::size_t j = static_cast<std::size_t>(uniform_int(gen, 0, static_cast<std::int64_t>(n) - 1));
    if (j + 1 < i || j > i + 1) put(i, j, uniform_int(gen, -off, off));
  }
  for (std::size_t i = 0; i < n; ++i) entries.push_back({i, i, std::min(bound, row_sum[i] + 1 + uniform_int(gen, 0, off))});
  return lospace::SparseMatrix(n, n, std::move(entries));
}

inline oracle::DenseInt dense_of(const lospace::SparseMatrix& a) { return oracle::to_dense_int(a.dense()); }

}  // namespace testing_support
