#include <algorithm>
#include <cmath>

#include "lospace/error.hpp"
#include "lospace/primes.hpp"
#include "lospace/rational_solver.hpp"
#include "lospace/workspace.hpp"

namespace lospace {

namespace {

double log2_big(const BigInt& x) {
  if (sgn(x) == 0) return -INFINITY;
  long exp = 0;
  double m = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log2(std::fabs(m)) + static_cast<double>(exp);
}

std::size_t power_count(const BigInt& base, const BigInt& target) {
  std::size_t t = 0;
  BigInt acc = 1;
  while (acc <= target) {
    acc *= base;
    ++t;
  }
  return t;
}

std::int64_t int_vector_bits(const IntVector& v) {
  std::int64_t bits = 0;
  for (const auto& x : v) bits += static_cast<std::int64_t>(storage_bits(x));
  return bits;
}

// value / det rounded once to `bits` bits.
FloatL divide_by(const FloatL& value, const BigInt& det, int bits) {
  if (value.is_zero()) return FloatL::zero(bits);
  BigInt num = value.mantissa();
  BigInt den = det;
  std::int64_t e = value.exponent();
  if (e >= 0) {
    num = shift_left(num, static_cast<std::size_t>(e));
  } else {
    den = shift_left(den, static_cast<std::size_t>(-e));
  }
  if (sgn(den) < 0) {
    num = -num;
    den = -den;
  }
  return FloatL::from_ratio(num, den, bits);
}

}  // namespace

FpElem digit_of_b(const BigInt& b, const BigInt& det, std::uint64_t p, std::size_t i) {
  BigInt power = pow_int(from_u64(p), i);
  BigInt product = b * det;
  Charge charge("digit_of_b", static_cast<std::int64_t>(storage_bits(product) + storage_bits(power)));
  return floor_mod_u64(floor_div(product, power), p);
}

FloatL sign_combine(const FloatL& pos, const FloatL& neg, bool all_digits_zero) {
  if (all_digits_zero) return FloatL::zero(pos.bits());
  if (pos.sign() < 0 || neg.sign() < 0) throw Error(Errc::sign_mismatch, "accumulators must be nonnegative");
  // The digits of a nonnegative value v give pos = v and neg = p^T - 1 - v; a negative
  // value v is stored as p^T + v, so neg = -v - 1.
  if (fl_cmp(pos, neg) == std::strong_ordering::less) return pos;
  return fl_add_same_sign(neg, FloatL::from_int(1, neg.bits())).negated();
}

LiftState::LiftState(const LinearOperator& a, std::span<const BigInt> b, const BigInt& det, std::uint64_t prime,
                     double delta, Rng rng)
    : a_(a), b_(b), det_(det), mod_(prime) {
  if (!a.is_square()) throw Error(Errc::dimension_mismatch, "lifting needs a square operator");
  if (b.size() != a.rows()) throw Error(Errc::dimension_mismatch, "right-hand side length");
  reduced_ = a.reduce(mod_);
  owned_solver_ = std::make_unique<PolySolver>(*reduced_, delta, rng);
  solver_ = owned_solver_.get();
  std::size_t n = a.rows();
  digits_.assign(n, 0);
  residual_.assign(n, BigInt(0));
  residual_bound_ = 2 * from_u64(n) * a.entry_bound();
}

LiftState::LiftState(const LinearOperator& a, std::span<const BigInt> b, const BigInt& det, PolySolver& solver)
    : a_(a), b_(b), det_(det), mod_(solver.modulus()), solver_(&solver) {
  if (!a.is_square()) throw Error(Errc::dimension_mismatch, "lifting needs a square operator");
  if (b.size() != a.rows()) throw Error(Errc::dimension_mismatch, "right-hand side length");
  std::size_t n = a.rows();
  digits_.assign(n, 0);
  residual_.assign(n, BigInt(0));
  residual_bound_ = 2 * from_u64(n) * a.entry_bound();
}

LiftState::~LiftState() = default;

const FpVector& LiftState::step() {
  std::size_t n = a_.rows();
  const std::uint64_t p = mod_.value();
  Charge state("lift-state", static_cast<std::int64_t>(2 * n) * mod_.elem_bits() + int_vector_bits(residual_) +
                                 static_cast<std::int64_t>(storage_bits(power_)));
  FpVector rhs(n);
  {
    Charge product("lift-product", 0);
    for (std::size_t j = 0; j < n; ++j) {
      // One big product at a time.
      mpz_mul(scratch_.get_mpz_t(), b_[j].get_mpz_t(), det_.get_mpz_t());
      product.resize(static_cast<std::int64_t>(storage_bits(scratch_)));
      mpz_fdiv_q(scratch_.get_mpz_t(), scratch_.get_mpz_t(), power_.get_mpz_t());
      rhs[j] = mod_.sub(floor_mod_u64(scratch_, p), mod_.reduce(residual_[j]));
    }
  }
  digits_ = solver_->solve(rhs);

  lifted_.resize(n);
  for (std::size_t j = 0; j < n; ++j) mpz_set_ui(lifted_[j].get_mpz_t(), digits_[j]);
  IntVector ay = a_.apply_int(lifted_);
  Charge product("lift-product", int_vector_bits(lifted_) + int_vector_bits(ay));
  for (std::size_t j = 0; j < n; ++j) {
    mpz_add(residual_[j].get_mpz_t(), residual_[j].get_mpz_t(), ay[j].get_mpz_t());
    mpz_fdiv_q_ui(residual_[j].get_mpz_t(), residual_[j].get_mpz_t(), p);
    if (mpz_cmpabs(residual_[j].get_mpz_t(), residual_bound_.get_mpz_t()) > 0) throw Error(Errc::overflow, "lifting residual exceeded 2nU");
  }
  mpz_mul_ui(power_.get_mpz_t(), power_.get_mpz_t(), p);
  ++iteration_;
  return digits_;
}

BigInt LiftState::residual_norm() const {
  BigInt m = 0;
  for (const auto& r : residual_) {
    if (abs(r) > m) m = abs(r);
  }
  return m;
}

std::size_t default_block_count(std::size_t n, const BigInt& bound, double eps) {
  double denom = std::log2(2.0) + std::log2(static_cast<double>(std::max<std::size_t>(n, 1))) + log2_big(bound);
  double k = std::ceil(std::log2(1.0 / eps) / denom);
  if (!(k >= 1.0)) k = 1.0;
  return std::min<std::size_t>(std::max<std::size_t>(n, 1), static_cast<std::size_t>(k));
}

PreparedSolver::PreparedSolver(const LinearOperator& a, Rng rng, const SolveOptions& opts) : a_(a), opts_(opts) {
  if (!a.is_square()) throw Error(Errc::dimension_mismatch, "solve needs a square operator");
  std::size_t n = a.rows();
  if (n == 0) {
    det_ = 1;
    return;
  }
  Rng det_rng = rng.derive("determinant");
  DeterminantOptions dopts;
  dopts.c = opts.c;
  dopts.threads = opts.threads;
  det_ = determinant(a, det_rng, dopts);
  if (singular()) return;

  BigInt nb = from_u64(n);
  PrimeRange range = field_prime_range(nb * nb * nb * a.entry_bound());
  for (std::size_t attempt = 0;; ++attempt) {
    if (attempt > 3) throw Error(Errc::retries_exhausted, "every lifting prime divided the determinant");
    Rng prime_rng = rng.derive("lift-prime", attempt);
    BigInt cand = sample_primes_in(1, range.lo, range.hi, prime_rng)[0];
    if (floor_mod(det_, cand) != 0) {
      prime_ = to_u64(cand);
      break;
    }
  }
  double delta = std::pow(static_cast<double>(std::max<std::size_t>(n, 2)), -opts.c);
  reduced_ = a.reduce(Modulus(prime_));
  solver_ = std::make_unique<PolySolver>(*reduced_, delta, rng.derive("lift-solver"));
}

PreparedSolver::~PreparedSolver() = default;

SolveOutcome PreparedSolver::solve(std::span<const BigInt> b, double eps) {
  const LinearOperator& a = a_;
  if (b.size() != a.rows()) throw Error(Errc::dimension_mismatch, "right-hand side length");
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::invalid_argument, "epsilon must lie in (0, 1)");
  std::size_t n = a.rows();
  SolveOutcome out;
  out.det = det_;
  if (n == 0) return out;
  if (singular()) {
    out.singular = true;
    return out;
  }
  Charge det_charge("lift-det", static_cast<std::int64_t>(storage_bits(det_)) +
                                    static_cast<std::int64_t>(solver_->polynomial().size()) * kFieldPrimeBits);

  BigInt bound = a.entry_bound();
  const std::uint64_t p = prime_;
  // p^T must exceed twice |det * x_i| with room to tell the two accumulators apart.
  BigInt target = 4 * cramer_bound(n, bound, b) + 4;
  std::size_t iterations = std::max(n, power_count(from_u64(p), target));
  std::size_t exact_bits = bit_length(pow_int(from_u64(p), iterations)) + 2;
  double log_nu = std::log2(static_cast<double>(n)) + log2_big(bound);
  double want = std::max(2.0 * (log_nu + std::log2(1.0 / eps)),
                         std::log2((2.0 * static_cast<double>(iterations) + 4.0) / eps) + 1.0);
  // Accumulators need no more than the exact width; the final quotient keeps the full width.
  int out_bits = std::max(32, static_cast<int>(std::ceil(want)));
  int bits = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(out_bits), exact_bits));

  std::size_t blocks = opts_.blocks ? std::min(opts_.blocks, n) : default_block_count(n, bound, eps);
  std::size_t width = (n + blocks - 1) / blocks;
  out.plan = SolvePlan{p, iterations, bits, blocks};
  out.solution.assign(n, FloatL::zero(out_bits));

  const FloatL prime_float = FloatL::from_int(from_u64(p), bits);
  for (std::size_t lo = 0; lo < n; lo += width) {
    std::size_t hi = std::min(n, lo + width);
    std::size_t len = hi - lo;
    LiftState state(a, b, det_, *solver_);
    std::vector<FloatL> pos(len, FloatL::zero(bits)), neg(len, FloatL::zero(bits));
    std::vector<char> nonzero(len, 0);
    Charge accum("lift-accum", static_cast<std::int64_t>(2 * len) * (bits + 64) + static_cast<std::int64_t>(len));
    FloatL power = FloatL::from_int(1, bits);
    for (std::size_t i = 0; i < iterations; ++i) {
      const FpVector& digits = state.step();
      for (std::size_t j = 0; j < len; ++j) {
        FpElem d = digits[lo + j];
        if (d != 0) {
          nonzero[j] = 1;
          pos[j] = fl_add_same_sign(pos[j], fl_mul(FloatL::from_int(from_u64(d), bits), power));
        }
        FpElem c = p - 1 - d;
        if (c != 0) neg[j] = fl_add_same_sign(neg[j], fl_mul(FloatL::from_int(from_u64(c), bits), power));
      }
      power = fl_mul(power, prime_float);
    }
    for (std::size_t j = 0; j < len; ++j) {
      out.solution[lo + j] = divide_by(sign_combine(pos[j], neg[j], !nonzero[j]), det_, out_bits);
    }
  }
  return out;
}

SolveOutcome lin_solve(const LinearOperator& a, std::span<const BigInt> b, double eps, Rng& rng,
                       const SolveOptions& opts) {
  if (!a.is_square()) throw Error(Errc::dimension_mismatch, "solve needs a square operator");
  if (b.size() != a.rows()) throw Error(Errc::dimension_mismatch, "right-hand side length");
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::invalid_argument, "epsilon must lie in (0, 1)");
  PreparedSolver prepared(a, rng, opts);
  return prepared.solve(b, eps);
}

SolveOutcome lin_solve(const SparseMatrix& a, std::span<const BigInt> b, double eps, Rng& rng,
                       const SolveOptions& opts) {
  SparseOperator op(a);
  return lin_solve(op, b, eps, rng, opts);
}

}  // namespace lospace
