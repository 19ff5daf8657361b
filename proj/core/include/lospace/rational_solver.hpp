#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lospace/bigint.hpp"
#include "lospace/float.hpp"
#include "lospace/linop.hpp"
#include "lospace/rng.hpp"
#include "lospace/sparse.hpp"
#include "lospace/wiedemann.hpp"

namespace lospace {

struct DeterminantOptions {
  double c = 2.0;        // failure probability n^-c
  unsigned threads = 1;  // residues computed concurrently when > 1
};

// Exact determinant from residues modulo random primes, recombined by CRT.
BigInt determinant(const LinearOperator& a, Rng& rng, const DeterminantOptions& opts = {});
BigInt determinant(const SparseMatrix& a, Rng& rng, const DeterminantOptions& opts = {});

// floor(b * det / p^i) mod p.
FpElem digit_of_b(const BigInt& b, const BigInt& det, std::uint64_t p, std::size_t i);

// Signed value of a p-adic accumulator pair: `pos` accumulates the digits, `neg` the
// complements p-1-digit. The smaller of the two carries the magnitude.
FloatL sign_combine(const FloatL& pos, const FloatL& neg, bool all_digits_zero);

// Digit-by-digit lifting of det * A^-1 b modulo powers of p. The residual carried
// between steps stays bounded by 2 n U.
class LiftState {
 public:
  LiftState(const LinearOperator& a, std::span<const BigInt> b, const BigInt& det, std::uint64_t prime, double delta,
            Rng rng);
  // Shares a solver already built for A modulo `prime`.
  LiftState(const LinearOperator& a, std::span<const BigInt> b, const BigInt& det, PolySolver& solver);
  ~LiftState();
  LiftState(const LiftState&) = delete;
  LiftState& operator=(const LiftState&) = delete;

  // Computes the next digit vector and advances the residual.
  const FpVector& step();

  std::size_t iteration() const { return iteration_; }
  const FpVector& digits() const { return digits_; }
  const IntVector& residual() const { return residual_; }
  BigInt residual_norm() const;
  const BigInt& residual_bound() const { return residual_bound_; }
  std::uint64_t prime() const { return mod_.value(); }

 private:
  const LinearOperator& a_;
  std::span<const BigInt> b_;
  const BigInt& det_;
  Modulus mod_;
  std::unique_ptr<ModOperator> reduced_;
  std::unique_ptr<PolySolver> owned_solver_;
  PolySolver* solver_ = nullptr;
  std::size_t iteration_ = 0;
  BigInt power_ = 1;  // p^iteration
  FpVector digits_;
  IntVector residual_;
  BigInt residual_bound_;
  BigInt scratch_;
  IntVector lifted_;
};

struct SolveOptions {
  double c = 2.0;
  std::size_t blocks = 0;  // 0 selects the default block count
  unsigned threads = 1;    // used by the determinant stage
};

// Parameters fixed before lifting; exposed for instrumentation and tests.
struct SolvePlan {
  std::uint64_t prime = 0;
  std::size_t iterations = 0;
  int bits = 0;
  std::size_t blocks = 1;
};

struct SolveOutcome {
  bool singular = false;
  std::vector<FloatL> solution;
  BigInt det;
  SolvePlan plan;
};

// Default block count min(n, max(1, ceil(log2(1/eps) / log2(2 n U)))).
std::size_t default_block_count(std::size_t n, const BigInt& bound, double eps);

// The right-hand-side independent part of a solve: the determinant, the lifting prime
// and the cached minimal polynomial modulo that prime. Solving many systems with one
// matrix reuses all three.
class PreparedSolver {
 public:
  PreparedSolver(const LinearOperator& a, Rng rng, const SolveOptions& opts = {});
  ~PreparedSolver();
  PreparedSolver(const PreparedSolver&) = delete;
  PreparedSolver& operator=(const PreparedSolver&) = delete;

  bool singular() const { return sgn(det_) == 0; }
  const BigInt& det() const { return det_; }
  std::uint64_t prime() const { return prime_; }
  SolveOutcome solve(std::span<const BigInt> b, double eps);

 private:
  const LinearOperator& a_;
  SolveOptions opts_;
  BigInt det_;
  std::uint64_t prime_ = 0;
  std::unique_ptr<ModOperator> reduced_;
  std::unique_ptr<PolySolver> solver_;
};

// Entry-wise e^eps approximation of A^-1 b, or singular.
SolveOutcome lin_solve(const LinearOperator& a, std::span<const BigInt> b, double eps, Rng& rng,
                       const SolveOptions& opts = {});
SolveOutcome lin_solve(const SparseMatrix& a, std::span<const BigInt> b, double eps, Rng& rng,
                       const SolveOptions& opts = {});

// Least-squares solution through the normal equations on the Gram operator.
SolveOutcome linear_regression(const SparseMatrix& a, std::span<const BigInt> b, double eps, Rng& rng,
                               const SolveOptions& opts = {});

}  // namespace lospace
