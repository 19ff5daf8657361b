#pragma once

#include <cstddef>
#include <span>

#include "lospace/linop.hpp"
#include "lospace/modular.hpp"
#include "lospace/rng.hpp"

namespace lospace {

// Monic minimal linear recurrence g of seq: sum_i g_i seq[i + j] = 0 for every valid j.
FpPoly berlekamp_massey(std::span<const FpElem> seq, const Modulus& mod);

// One projection run: minimal recurrence of x^T A^i y, i = 0..2n, for random x, y.
// Always a monic factor of the minimal polynomial of A.
FpPoly wiedemann_run(const ModOperator& a, Rng& rng);

// Highest-degree result among `boost` runs (stops early at degree n).
FpPoly minimal_polynomial(const ModOperator& a, std::size_t boost, Rng& rng);
FpPoly minimal_polynomial(const LinearOperator& a, const Modulus& mod, std::size_t boost, Rng& rng);

// ceil(48 ln(1/delta)), at least 1.
std::size_t boost_count(double delta);

// out = f(A) z by Horner's rule with two live vectors.
void apply_poly(const ModOperator& a, std::span<const FpElem> f, std::span<const FpElem> z, std::span<FpElem> out);

// Nonzero v with A v = 0 (mod p), verified. Throws RETRIES_EXHAUSTED past the budget.
FpVector find_kernel(const ModOperator& a, double delta, Rng& rng);
FpVector find_kernel(const LinearOperator& a, const Modulus& mod, double delta, Rng& rng);

// x with A x = b (mod p), verified. Throws RETRIES_EXHAUSTED past the budget, which is
// also the outcome when A is singular mod p.
FpVector linsolve_zp(const ModOperator& a, std::span<const FpElem> b, double delta, Rng& rng);
FpVector linsolve_zp(const LinearOperator& a, std::span<const FpElem> b, const Modulus& mod, double delta,
                     Rng& rng);

// det(A) mod p with a random diagonal preconditioner.
FpElem determinant_zp(const ModOperator& a, double delta, Rng& rng);
FpElem determinant_zp(const LinearOperator& a, const Modulus& mod, double delta, Rng& rng);

// Solves A x = b (mod p) for many right-hand sides by reusing the minimal polynomial
// of A: x = -mu_0^{-1} sum_{i>=1} mu_i A^{i-1} b. Every answer is checked; a right-hand
// side the cached polynomial cannot handle falls back to linsolve_zp.
class PolySolver {
 public:
  PolySolver(const ModOperator& a, double delta, Rng rng);

  FpVector solve(std::span<const FpElem> b);
  const FpPoly& polynomial() const { return mu_; }
  const Modulus& modulus() const { return a_.modulus(); }
  std::size_t fallbacks() const { return fallbacks_; }

 private:
  void refresh();

  const ModOperator& a_;
  double delta_;
  Rng rng_;
  FpPoly mu_;
  std::size_t fallbacks_ = 0;
};

}  // namespace lospace
