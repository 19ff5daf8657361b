#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lospace/sparse.hpp"

namespace lospace::cli {

enum ExitCode : int { exit_ok = 0, exit_singular = 1, exit_input = 2, exit_retry = 3 };

struct BenchRow {
  std::size_t n = 0;
  std::size_t nnz = 0;
  double ms = 0.0;
  std::int64_t peak_bits = 0;
  double ratio = 0.0;  // peak_bits / (n log2(nU))
};

struct BenchOptions {
  std::vector<std::size_t> sizes;
  double eps = 1e-6;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool timing = true;  // false prints 0 in the ms column
};

inline constexpr std::int64_t kBenchBound = 100;

// Tridiagonal plus one random off-band entry per row, strictly diagonally dominant,
// entries in [-100, 100].
SparseMatrix bench_matrix(std::size_t n, std::uint64_t seed);

std::vector<BenchRow> bench_run(const BenchOptions& opts);
// CSV with header n,nnz,ms,peak_bits,ratio.
std::string bench_csv(const std::vector<BenchRow>& rows);

// Full command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lospace::cli
