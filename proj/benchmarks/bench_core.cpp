#include <benchmark/benchmark.h>

#include "lospace/rational_solver.hpp"
#include "lospace/spectral.hpp"
#include "lospace/wiedemann.hpp"
#include "lospace/workspace.hpp"
#include "lospace_cli.hpp"

namespace {

using namespace lospace;

IntVector bench_rhs(std::size_t n) {
  Rng rng = Rng(1).derive("bench-rhs", n);
  IntVector b(n);
  for (auto& x : b) x = rng.uniform(BigInt(-100), BigInt(100));
  return b;
}

void BM_MinimalPolynomial(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  SparseMatrix a = cli::bench_matrix(n, 1);
  SparseOperator op(a);
  Modulus mod((std::uint64_t{1} << 61) - 1);
  auto reduced = op.reduce(mod);
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(minimal_polynomial(*reduced, 1, rng));
}
BENCHMARK(BM_MinimalPolynomial)->Arg(64)->Arg(128)->Arg(256);

void BM_Determinant(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  SparseMatrix a = cli::bench_matrix(n, 1);
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(determinant(a, rng));
}
BENCHMARK(BM_Determinant)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_LinSolve(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  SparseMatrix a = cli::bench_matrix(n, 1);
  IntVector b = bench_rhs(n);
  Rng rng(4);
  WorkspaceMeter meter;
  for (auto _ : state) {
    MeterScope scope(meter);
    benchmark::DoNotOptimize(lin_solve(a, b, 1e-6, rng));
  }
  state.counters["peak_bits"] = static_cast<double>(meter.peak_bits());
}
BENCHMARK(BM_LinSolve)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::vector<std::int64_t>> dense(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    dense[i][i] = static_cast<std::int64_t>(2 * i) - static_cast<std::int64_t>(n);
    if (i + 1 < n) dense[i][i + 1] = dense[i + 1][i] = 1;
  }
  SparseMatrix a = SparseMatrix::from_dense(dense);
  Rng rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(a, 0.05, rng));
}
BENCHMARK(BM_Spectrum)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
