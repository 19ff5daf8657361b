#include <algorithm>
#include <cmath>
#include <thread>

#include "lospace/error.hpp"
#include "lospace/primes.hpp"
#include "lospace/rational_solver.hpp"
#include "lospace/workspace.hpp"

namespace lospace {

namespace {

// Smallest t with lo^t > target.
std::size_t power_count(const BigInt& lo, const BigInt& target) {
  std::size_t t = 0;
  BigInt acc = 1;
  while (acc <= target) {
    acc *= lo;
    ++t;
  }
  return t;
}

}  // namespace

BigInt determinant(const LinearOperator& a, Rng& rng, const DeterminantOptions& opts) {
  if (!a.is_square()) throw Error(Errc::dimension_mismatch, "determinant of a non-square operator");
  std::size_t n = a.rows();
  if (n == 0) return 1;
  BigInt bound = a.entry_bound();
  BigInt lower = from_u64(n) * from_u64(n) * bound;
  PrimeRange range = field_prime_range(lower);
  BigInt had = hadamard_bound(n, bound);
  std::size_t count = std::max(n, power_count(range.lo, 2 * had));
  double delta = std::pow(static_cast<double>(std::max<std::size_t>(n, 2)), -opts.c) / static_cast<double>(count);

  Rng prime_rng = rng.derive("det-primes");
  PrimeSamplingOptions popts;
  popts.c = opts.c;
  std::vector<BigInt> primes = sample_primes_in(count, range.lo, range.hi, prime_rng, popts);
  Charge prime_charge("det-primes", static_cast<std::int64_t>(count) * kFieldPrimeBits);

  auto residue = [&](std::size_t i) {
    Modulus mod(primes[i]);
    Rng local = rng.derive("det-residue", i);
    return determinant_zp(a, mod, delta, local);
  };

  CrtAccumulator crt;
  Charge crt_charge("det-crt", 0);
  auto absorb = [&](std::size_t i, FpElem r) {
    crt.add(primes[i], from_u64(r));
    crt_charge.resize(storage_bits(crt.modulus()) + storage_bits(crt.value()));
  };

  unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(count)));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) absorb(i, residue(i));
  } else {
    FpVector residues(count);
    Charge residue_charge("det-residues", static_cast<std::int64_t>(count) * kFieldPrimeBits);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < count; i += threads) residues[i] = residue(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (std::size_t i = 0; i < count; ++i) absorb(i, residues[i]);
  }
  return signed_representative(crt.value(), crt.modulus());
}

BigInt determinant(const SparseMatrix& a, Rng& rng, const DeterminantOptions& opts) {
  SparseOperator op(a);
  return determinant(op, rng, opts);
}

}  // namespace lospace
