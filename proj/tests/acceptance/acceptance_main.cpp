// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lospace/error.hpp"
#include "lospace/float.hpp"
#include "lospace/primes.hpp"
#include "lospace/rational_solver.hpp"
#include "lospace/spectral.hpp"
#include "lospace/wiedemann.hpp"
#include "lospace_cli.hpp"
#include "spectral_checks.hpp"
#include "test_support.hpp"

using namespace lospace;
using testing_support::Dense64;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool solution_matches(const SolveOutcome& got, const std::vector<Rational>& want, double eps) {
  if (got.singular || got.solution.size() != want.size()) return false;
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (!testing_support::multiplicatively_close(got.solution[i], want[i], eps)) return false;
  }
  return true;
}

Outcome criterion_1() {
  Clock clock;
  std::mt19937_64 gen(101);
  Rng rng(101);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + static_cast<std::size_t>(trial) % 40;
    Dense64 raw = testing_support::random_dense(gen, n, n, 50);
    Rng r = rng.derive("det", trial);
    if (determinant(SparseMatrix::from_dense(raw), r) != oracle::oracle_det_bareiss(oracle::to_dense_int(raw))) {
      ++mismatches;
    }
  }
  double t = clock.seconds();
  return {mismatches == 0 && t <= 300.0, std::to_string(mismatches) + " mismatches in 200 runs, " + fmt("%.1f s", t)};
}

Outcome criterion_2() {
  Clock clock;
  std::mt19937_64 gen(102);
  Rng rng(102);
  int failures = 0;
  int zero_cases = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 2 + static_cast<std::size_t>(trial) % 23;
    Dense64 raw = testing_support::random_invertible(gen, n, 50);
    auto dense = oracle::to_dense_int(raw);
    IntVector b;
    if (trial % 5 == 0) {
      // b = A x with some zero entries in x.
      ++zero_cases;
      IntVector x = testing_support::random_vector(gen, n, 50);
      for (std::size_t i = 0; i < n; i += 2) x[i] = 0;
      b.assign(n, BigInt(0));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) b[i] += raw[i][j] * x[j];
      }
    } else {
      b = testing_support::random_vector(gen, n, 50);
    }
    auto want = oracle::oracle_solve_exact(dense, b);
    Rng r = rng.derive("solve", trial);
    if (!want || !solution_matches(lin_solve(SparseMatrix::from_dense(raw), b, 1e-6, r), *want, 1e-6)) ++failures;
  }
  double t = clock.seconds();
  return {failures == 0 && t <= 300.0, std::to_string(failures) + " failing systems of 100 (" +
                                           std::to_string(zero_cases) + " with exact zeros), " + fmt("%.1f s", t)};
}

Outcome criterion_3() {
  Clock clock;
  std::mt19937_64 gen(103);
  Rng rng(103);
  int failures = 0;
  const int trials = 20;
  for (int trial = 0; trial < trials; ++trial) {
    Dense64 raw = testing_support::random_invertible(gen, 8, 10);
    IntVector b = testing_support::random_vector(gen, 8, 100000000);
    auto want = oracle::oracle_solve_exact(oracle::to_dense_int(raw), b);
    Rng r = rng.derive("solve", trial);
    if (!want || !solution_matches(lin_solve(SparseMatrix::from_dense(raw), b, 1e-6, r), *want, 1e-6)) ++failures;
  }
  return {failures == 0, std::to_string(failures) + " failing systems of " + std::to_string(trials) +
                             " with |b| up to 1e8, " + fmt("%.1f s", clock.seconds())};
}

Outcome criterion_4() {
  Clock clock;
  std::mt19937_64 gen(104);
  Rng rng(104);
  int missed = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 2 + static_cast<std::size_t>(trial) % 15;
    Dense64 raw = testing_support::random_dense(gen, n, n, 50);
    std::size_t i = static_cast<std::size_t>(testing_support::uniform_int(gen, 0, static_cast<std::int64_t>(n) - 1));
    std::size_t j = (i + 1 + static_cast<std::size_t>(trial) % (n - 1)) % n;
    if (trial % 2 == 0) {
      raw[j] = raw[i];
    } else {
      std::fill(raw[i].begin(), raw[i].end(), 0);
    }
    IntVector b = testing_support::random_vector(gen, n, 50);
    Rng r = rng.derive("singular", trial);
    if (!lin_solve(SparseMatrix::from_dense(raw), b, 1e-6, r).singular) ++missed;
  }
  return {missed == 0, std::to_string(missed) + " of 50 singular systems not reported, " + fmt("%.1f s", clock.seconds())};
}

Outcome criterion_5() {
  Clock clock;
  const std::uint64_t p31 = 2147483647;
  Modulus mod(p31);
  std::mt19937_64 gen(105);
  Rng rng(105);
  int bad_solutions = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + static_cast<std::size_t>(trial) % 20;
    Dense64 raw = testing_support::random_invertible(gen, n, 1000);
    if (floor_mod(oracle::oracle_det_bareiss(oracle::to_dense_int(raw)), from_u64(p31)) == 0) continue;
    SparseMatrix a = SparseMatrix::from_dense(raw);
    SparseOperator op(a);
    auto reduced = op.reduce(mod);
    FpVector b(n);
    for (auto& v : b) v = rng.uniform(0, p31 - 1);
    Rng r = rng.derive("zp", trial);
    FpVector x = linsolve_zp(*reduced, b, 1e-6, r);
    FpVector check(n);
    reduced->apply(x, check);
    if (check != b) ++bad_solutions;
  }
  int hits = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Dense64 raw = testing_support::random_dense(gen, 8, 8, 1000);
    SparseMatrix a = SparseMatrix::from_dense(raw);
    SparseOperator op(a);
    auto reduced = op.reduce(mod);
    Rng r = rng.derive("minpoly", trial);
    if (minimal_polynomial(*reduced, 1, r) == oracle::oracle_minpoly_mod(oracle::to_dense_int(raw), p31)) ++hits;
  }
  return {bad_solutions == 0 && hits >= 100, std::to_string(bad_solutions) + " unverified solutions of 200; " +
                                                 std::to_string(hits) + "/200 un-boosted minimal polynomials, " +
                                                 fmt("%.1f s", clock.seconds())};
}

// Shared instance family for criteria 6 and 7.
std::vector<Dense64> symmetric_family() {
  std::mt19937_64 gen(106);
  std::vector<Dense64> family;
  for (int k = 0; k < 50; ++k) {
    family.push_back(testing_support::random_symmetric(gen, 1 + static_cast<std::size_t>(k) % 10, 10));
  }
  return family;
}

Outcome criterion_6() {
  Clock clock;
  Rng rng(106);
  int failures = 0;
  std::size_t max_attempts = 0;
  auto family = symmetric_family();
  for (std::size_t k = 0; k < family.size(); ++k) {
    const Dense64& raw = family[k];
    auto want = oracle::oracle_eigs_bisect(oracle::to_dense_rat(oracle::to_dense_int(raw)), 1e-4);
    SpectrumStats stats;
    Rng r = rng.derive("spectrum", k);
    bool ok = true;
    try {
      auto got = spectrum(SparseMatrix::from_dense(raw), 0.05, r, &stats);
      ok = got.size() == raw.size() && std::is_sorted(got.begin(), got.end());
      for (std::size_t i = 0; ok && i < got.size(); ++i) ok = std::fabs(got[i].to_double() - want[i]) <= 0.05 + 1e-4;
    } catch (const Error&) {
      ok = false;
    }
    max_attempts = std::max(max_attempts, stats.attempts);
    if (!ok) ++failures;
  }
  double t = clock.seconds();
  return {failures == 0 && t <= 600.0, std::to_string(failures) + " failing matrices of 50, at most " +
                                           std::to_string(max_attempts) + " attempts, " + fmt("%.1f s", t)};
}

Outcome criterion_7() {
  Clock clock;
  Rng rng(107);
  const double eps = 0.05;
  auto family = symmetric_family();
  int eig_failures = 0;
  double worst_res = 0, worst_norm = 0, worst_inner = 0;
  for (std::size_t k = 0; k < family.size(); ++k) {
    const Dense64& raw = family[k];
    auto want = oracle::oracle_eigs_bisect(oracle::to_dense_rat(oracle::to_dense_int(raw)), 1e-9);
    std::vector<EigenPair> pairs;
    Rng r = rng.derive("eigen", k);
    try {
      eigendecompose(SparseMatrix::from_dense(raw), eps, r, [&](const EigenPair& p) { pairs.push_back(p); });
    } catch (const Error&) {
      ++eig_failures;
      continue;
    }
    auto rep = testing_support::check_eigenpairs(raw, pairs, want);
    worst_res = std::max(worst_res, rep.worst_residual);
    worst_norm = std::max(worst_norm, rep.worst_norm);
    worst_inner = std::max(worst_inner, rep.worst_inner);
    if (rep.count != raw.size() || rep.worst_value > eps || rep.worst_residual > eps || rep.worst_norm > eps ||
        rep.worst_inner > eps) {
      ++eig_failures;
    }
  }
  int svd_failures = 0;
  int svd_runs = 0;
  double worst_svd = 0;
  for (std::size_t k = 0; k < family.size(); k += 2) {
    const Dense64& raw = family[k];
    if (raw.size() > 8) continue;
    ++svd_runs;
    std::vector<SingularTriple> triples;
    Rng r = rng.derive("svd", k);
    try {
      svd(SparseMatrix::from_dense(raw), eps, r, [&](const SingularTriple& t) { triples.push_back(t); });
    } catch (const Error&) {
      ++svd_failures;
      continue;
    }
    auto rep = testing_support::check_svd(raw, triples);
    double worst = std::max({rep.left_orth, rep.right_orth, rep.forward, rep.backward});
    worst_svd = std::max(worst_svd, worst);
    if (rep.count != raw.size() || worst > eps) ++svd_failures;
  }
  std::ostringstream detail;
  detail << eig_failures << " failing eigendecompositions of 50 (worst residual " << fmt("%.2e", worst_res)
         << ", norm " << fmt("%.2e", worst_norm) << ", inner " << fmt("%.2e", worst_inner) << "); " << svd_failures
         << " failing SVDs of " << svd_runs << " (worst norm " << fmt("%.2e", worst_svd) << "), "
         << fmt("%.1f s", clock.seconds());
  return {eig_failures == 0 && svd_failures == 0, detail.str()};
}

Outcome criterion_8() {
  Clock clock;
  cli::BenchOptions opts;
  opts.sizes = {64, 128, 256};
  opts.eps = 1e-6;
  auto rows = cli::bench_run(opts);
  std::printf("%s", cli::bench_csv(rows).c_str());
  double lo = rows[0].ratio, hi = rows[0].ratio;
  for (const auto& r : rows) {
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  double n = 256;
  double dense_bits = 8.0 * n * n * std::log2(n * static_cast<double>(cli::kBenchBound));
  double share = static_cast<double>(rows[2].peak_bits) / dense_bits;
  double t = clock.seconds();
  return {hi / lo < 2.5 && share < 0.05 && t <= 900.0,
          "ratio spread " + fmt("%.3f", hi / lo) + "x, n=256 peak is " + fmt("%.2f%%", 100.0 * share) +
              " of the dense footprint, " + fmt("%.1f s", t)};
}

Outcome criterion_9() {
  Clock clock;
  std::mt19937_64 gen(109);
  Rng rng(109);
  int differences = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 2 + static_cast<std::size_t>(trial) % 15;
    Dense64 raw = testing_support::random_invertible(gen, n, 50);
    IntVector b = testing_support::random_vector(gen, n, 50);
    SparseMatrix a = SparseMatrix::from_dense(raw);
    SolveOptions single;
    single.blocks = 1;
    Rng r1 = rng.derive("blocks", trial), r2 = rng.derive("blocks", trial);
    auto x1 = lin_solve(a, b, 1e-6, r1, single);
    auto x2 = lin_solve(a, b, 1e-6, r2);
    std::string s1, s2;
    for (const auto& v : x1.solution) s1 += v.to_string() + "\n";
    for (const auto& v : x2.solution) s2 += v.to_string() + "\n";
    if (s1 != s2) ++differences;
  }
  return {differences == 0, std::to_string(differences) + " of 20 outputs differ between K=1 and default K, " +
                                fmt("%.1f s", clock.seconds())};
}

Outcome float_chains() {
#ifdef LOSPACE_TRACK_MERR
  std::mt19937_64 gen(110);
  std::uniform_int_distribution<long> mant(1, (1L << 16) - 1), ex(-3, 3);
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    int bits = 16 + trial % 25;
    int steps = 1 + trial % 120;
    FloatL acc = FloatL::from_parts(BigInt(mant(gen)), 0, bits);
    Rational exact = acc.to_rational();
    bool ok = true;
    for (int k = 1; k <= steps && ok; ++k) {
      if (gen() % 2 == 0) {
        Rational term(mant(gen));
        long e = ex(gen);
        if (e >= 0) {
          mpq_mul_2exp(term.get_mpq_t(), term.get_mpq_t(), e);
        } else {
          mpq_div_2exp(term.get_mpq_t(), term.get_mpq_t(), -e);
        }
        FloatL t = FloatL::from_ratio(term.get_num(), term.get_den(), bits);
        acc = fl_add_same_sign(acc, t);
        exact += t.to_rational();
      } else {
        FloatL f = FloatL::from_ratio(BigInt(mant(gen)), BigInt(1) << 15, bits);
        acc = fl_mul(acc, f);
        exact *= f.to_rational();
      }
      double err = std::fabs(std::log(Rational(acc.to_rational() / exact).get_d()));
      ok = acc.merr() <= k * std::ldexp(1.0, -bits) * (1 + 1e-12) && err <= acc.merr() * (1 + 1e-9);
    }
    if (!ok) ++failures;
  }
  return {failures == 0, "float " + std::to_string(failures) + "/1000"};
#else
  return {false, "float error tracking disabled in this build"};
#endif
}

Outcome crt_round_trips() {
  Rng rng(111);
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t k = 1 + static_cast<std::size_t>(trial) % 12;
    auto primes = sample_primes_in(k, BigInt(1) << 20, BigInt(1) << 40, rng);
    std::vector<CrtPair> sys;
    BigInt product = 1;
    for (const auto& p : primes) {
      sys.push_back({p, rng.uniform(BigInt(0), BigInt(p - 1))});
      product *= p;
    }
    auto r = crt_combine(sys);
    bool ok = r.modulus == product && r.value >= 0 && r.value < product;
    for (const auto& pr : sys) ok = ok && floor_mod(r.value, pr.prime) == pr.residue;
    if (!ok) ++failures;
  }
  return {failures == 0, "crt " + std::to_string(failures) + "/1000"};
}

// Residual bound and exact digit reconstruction in one pass.
Outcome lifting_properties() {
  std::mt19937_64 gen(112);
  Rng rng(112);
  int bound_failures = 0;
  int digit_failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 1 + static_cast<std::size_t>(trial) % 10;
    Dense64 raw = testing_support::random_invertible(gen, n, 50);
    IntVector b = testing_support::random_vector(gen, n, trial % 3 ? 50 : 100000000);
    auto dense = oracle::to_dense_int(raw);
    BigInt det = oracle::oracle_det_bareiss(dense);
    std::uint64_t p = trial % 2 ? 1000003 : 2147483647;
    if (floor_mod(det, from_u64(p)) == 0) continue;
    SparseMatrix a = SparseMatrix::from_dense(raw);
    SparseOperator op(a);
    LiftState state(op, b, det, p, 1e-6, rng.derive("lift", trial));
    IntVector sum(n, BigInt(0));
    BigInt power = 1;
    bool bound_ok = true;
    for (std::size_t i = 0; i < n + 2; ++i) {
      const FpVector& digits = state.step();
      bound_ok = bound_ok && state.residual_norm() <= state.residual_bound();
      for (std::size_t j = 0; j < n; ++j) sum[j] += from_u64(digits[j]) * power;
      power *= from_u64(p);
    }
    auto x = oracle::oracle_solve_exact(dense, b);
    bool digits_ok = x.has_value();
    for (std::size_t j = 0; digits_ok && j < n; ++j) {
      Rational scaled = (*x)[j] * det;
      digits_ok = scaled.get_den() == 1 && floor_mod(sum[j] - scaled.get_num(), power) == 0;
    }
    if (!bound_ok) ++bound_failures;
    if (!digits_ok) ++digit_failures;
  }
  return {bound_failures == 0 && digit_failures == 0,
          "residual bound " + std::to_string(bound_failures) + "/1000, digits " + std::to_string(digit_failures) +
              "/1000"};
}

Outcome shift_invert_soundness() {
  std::mt19937_64 gen(113);
  Rng rng(113);
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 1 + static_cast<std::size_t>(trial) % 4;
    Dense64 raw = testing_support::random_symmetric(gen, n, 10);
    auto eigs = oracle::oracle_eigs_bisect(oracle::to_dense_rat(oracle::to_dense_int(raw)), 1e-9);
    double width = std::ldexp(1.0, -static_cast<int>(testing_support::uniform_int(gen, 0, 6)));
    double centre = trial % 2 ? eigs[static_cast<std::size_t>(trial) % n] +
                                    width * static_cast<double>(testing_support::uniform_int(gen, -8, 8)) / 4.0
                              : static_cast<double>(testing_support::uniform_int(gen, -30, 30));
    FixedL lo = FixedL::from_double(centre - width / 2, 8);
    FixedL hi = lo + FixedL::from_double(width, 8);
    SparseMatrix a = SparseMatrix::from_dense(raw);
    SparseOperator op(a);
    Rng r = rng.derive("interval", trial);
    Decision d = shift_invert(DyadicOperator(op), lo, hi, r);
    double l = lo.to_double(), h = hi.to_double(), q = (h - l) / 4;
    bool ok = true;
    if (d == Decision::no) {
      for (double e : eigs) ok = ok && !(e >= l && e <= h);
    } else {
      bool near = false;
      for (double e : eigs) near = near || (e >= l - q && e <= h + q);
      ok = near;
    }
    if (!ok) ++failures;
  }
  return {failures == 0, "shift_invert " + std::to_string(failures) + "/1000"};
}

Outcome level_counts() {
  std::mt19937_64 gen(114);
  Rng rng(114);
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 1 + static_cast<std::size_t>(trial) % 3;
    Dense64 raw = testing_support::random_symmetric(gen, n, 5);
    SpectrumStats stats;
    Rng r = rng.derive("levels", trial);
    bool ok = true;
    try {
      spectrum(SparseMatrix::from_dense(raw), 0.2, r, &stats);
      for (std::size_t internal : stats.internal_per_level) ok = ok && internal <= 2 * n;
    } catch (const Error&) {
      ok = false;
    }
    if (!ok) ++failures;
  }
  return {failures == 0, "levels " + std::to_string(failures) + "/1000"};
}

Outcome criterion_10() {
  Clock clock;
  Outcome total;
  std::string parts;
  for (const auto& suite : {float_chains, crt_round_trips, lifting_properties, shift_invert_soundness, level_counts}) {
    Outcome o = suite();
    total.pass = total.pass && o.pass;
    parts += (parts.empty() ? "" : "; ") + o.detail;
  }
  total.detail = "failures: " + parts + ", " + fmt("%.1f s", clock.seconds());
  return total;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::function<Outcome()>> criteria{criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                                 criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
  // Optional list of criterion numbers to run.
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    int id = static_cast<int>(k) + 1;
    if (!selected.empty() && std::find(selected.begin(), selected.end(), id) == selected.end()) continue;
    Outcome o;
    try {
      o = criteria[k]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s (%s)\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
