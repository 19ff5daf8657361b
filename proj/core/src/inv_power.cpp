#include <algorithm>
#include <climits>
#include <cmath>
#include <numbers>

#include "lospace/error.hpp"
#include "lospace/rational_solver.hpp"
#include "lospace/spectral.hpp"
#include "lospace/workspace.hpp"

namespace lospace {

namespace {

double log2_big(const BigInt& x) {
  if (sgn(x) == 0) return -INFINITY;
  long exp = 0;
  double m = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log2(std::fabs(m)) + static_cast<double>(exp);
}

std::int64_t vector_bits(const IntVector& v) {
  std::int64_t bits = 0;
  for (const auto& x : v) bits += static_cast<std::int64_t>(storage_bits(x));
  return bits;
}

FloatL float_of(double x) {
  Rational q(x);
  return FloatL::from_ratio(q.get_num(), q.get_den(), 64);
}

BigInt sum_squares(const IntVector& v) {
  BigInt s = 0;
  for (const auto& x : v) s += x * x;
  return s;
}

// Euclidean norm of an integer vector as a float with `bits` bits.
FloatL norm_of(const IntVector& v, int bits) {
  BigInt root = isqrt(shift_left(sum_squares(v), static_cast<std::size_t>(2 * bits)));
  return FloatL::from_parts(root, -bits, bits);
}

// Truncates x to integers w with x ~ w * 2^shift, keeping `keep` bits below the largest entry.
std::int64_t truncate_floats(const std::vector<FloatL>& x, int keep, IntVector& w) {
  std::int64_t top = INT64_MIN;
  for (const auto& v : x) {
    if (!v.is_zero()) top = std::max<std::int64_t>(top, v.exponent() + static_cast<std::int64_t>(bit_length(v.mantissa())) - 1);
  }
  w.assign(x.size(), BigInt(0));
  if (top == INT64_MIN) return 0;
  std::int64_t shift = top - keep;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const FloatL& v = x[j];
    if (v.is_zero()) continue;
    std::int64_t d = v.exponent() - shift;
    w[j] = d >= 0 ? shift_left(v.mantissa(), static_cast<std::size_t>(d))
                  : shift_right_floor(v.mantissa(), static_cast<std::size_t>(-d));
  }
  return shift;
}

// round(w_j * 2^frac / |w|).
void normalize_into(const IntVector& w, int frac, IntVector& z) {
  BigInt norm = isqrt(sum_squares(w));
  if (sgn(norm) == 0) throw Error(Errc::divide_by_zero, "zero iterate");
  z.resize(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) z[j] = round_div(shift_left(w[j], static_cast<std::size_t>(frac)), norm);
}

struct RunConfig {
  double eps = 0.1;
  double eps_s = 0.025;
  double delta = 1.0;
  std::size_t iterations = 0;
  double stop_below = 0.0;
  double stop_above = 0.0;
  double c = 2.0;
  bool keep_vector = false;
};

InvPowerResult run_inverse_power(const DyadicOperator& a, const FixedL& shift, const RunConfig& cfg, Rng& rng) {
  std::size_t n = a.dim();
  InvPowerResult result;
  int scale_bits = 0;
  ShiftedOperator num = a.numerator(shift, scale_bits);
  SolveOptions sopts;
  sopts.c = cfg.c;
  PreparedSolver solver(num, rng.derive("inv-power-solver"), sopts);
  if (solver.singular()) {
    result.singular = true;
    result.value = FloatL::zero(64);
    if (cfg.keep_vector) result.vector.assign(n, FixedL());
    return result;
  }

  // Accuracy of the inner solves: eps / (100 M^2), in the units of a - shift I.
  double nd = static_cast<double>(n);
  double bound = std::ldexp(std::exp2(log2_big(num.entry_bound())), -scale_bits);
  double log_m = std::max({2.0 * std::log2(nd) + 2.0 * std::log2(std::max(bound, 1e-300)),
                           std::log2(16.0) + 3.0 * std::log2(nd) - std::log2(cfg.delta),
                           std::log2(4.0) + 6.0 * std::log2(nd) + 7.0 * std::log2(nd / cfg.eps_s)}) +
                  std::log2(3.0);
  double log_inv_eps_l = std::log2(100.0 / cfg.eps) + 2.0 * log_m;
  double eps_l = std::exp2(-std::min(log_inv_eps_l, 1000.0));
  int frac = static_cast<int>(std::ceil(0.5 * std::log2(nd) + log_inv_eps_l)) + 2;

  Charge charge("inv-power", 0);
  IntVector z(n), w;
  double log_start_norm = 0.0;
  {
    Rng start = rng.derive("inv-power-start");
    IntVector g(n);
    double sq = 0.0;
    for (auto& x : g) {
      double v = start.normal();
      sq += v * v;
      x = FixedL::from_double(v, frac).scaled();
    }
    log_start_norm = 0.5 * std::log2(sq);
    normalize_into(g, frac, z);
  }
  double log_scale = static_cast<double>(scale_bits);
  double log_delta = std::log2(cfg.delta) + log_scale;
  double log_below = cfg.stop_below > 0.0 ? std::log2(cfg.stop_below) + log_scale : -INFINITY;
  double log_above = cfg.stop_above > 0.0 ? std::log2(cfg.stop_above) + log_scale : INFINITY;
  // With probability 1 - 1e-6 the unnormalized Gaussian start has component at least
  // 1e-6 * sqrt(pi/2) along the bottom eigenvector, so the normalized start has squared
  // component t; then |lambda_min| >= (t / |N^-i u0|^2)^(1/2i).
  const double log_t = 2.0 * (std::log2(1e-6 * std::sqrt(std::numbers::pi / 2.0)) - log_start_norm);
  double log_power_norm = 0.0;  // log2 |N^-i u0| relative to |u0|, start vector normalized

  std::size_t total = cfg.iterations;
  for (std::size_t i = 1; i <= total; ++i) {
    SolveOutcome out = solver.solve(z, eps_l);
    std::int64_t shift_w = truncate_floats(out.solution, frac + 8, w);
    charge.resize(2 * vector_bits(z) + vector_bits(w) +
                  static_cast<std::int64_t>(n) * (out.plan.bits + 64));
    // |u| = |w| 2^(shift_w - frac) in units of the integer numerator.
    double log_u = log2_big(isqrt(sum_squares(w))) + static_cast<double>(shift_w) - frac;
    result.iterations = i;
    if (2.0 * (log_u + log_delta) >= 1.0) {
      result.hit_delta = true;
      result.value = float_of(cfg.delta);
      if (cfg.keep_vector) {
        result.vector.resize(n);
        for (std::size_t j = 0; j < n; ++j) result.vector[j] = FixedL(z[j], frac);
      }
      return result;
    }
    log_power_norm += log_u;
    // Estimate |v| / |u| with |v| = |z| 2^-frac.
    FloatL estimate = fl_mul(norm_of(z, 64), fl_recip(norm_of(w, 64)));
    estimate = estimate.times_pow2(-shift_w - scale_bits);
    result.value = estimate;
    if (i == total) {
      if (cfg.keep_vector) {
        normalize_into(w, frac, z);
        result.vector.resize(n);
        for (std::size_t j = 0; j < n; ++j) result.vector[j] = FixedL(z[j], frac);
      }
      break;
    }
    double log_est = log2_big(isqrt(shift_left(sum_squares(z), 128))) - 64 - frac - log_u;
    if (log_est < log_below) break;
    double log_lower = (log_t - 2.0 * log_power_norm) / (2.0 * static_cast<double>(i));
    if (log_lower >= log_above + 1e-9) {
      result.certified_above = true;
      break;
    }
    normalize_into(w, frac, z);
  }
  return result;
}

}  // namespace

DyadicOperator::DyadicOperator(const LinearOperator& base, BigInt scale, IntVector diag, int frac_bits)
    : base_(&base), scale_(std::move(scale)), diag_(std::move(diag)), frac_bits_(frac_bits) {
  if (!base.is_square()) throw Error(Errc::dimension_mismatch, "symmetric operator must be square");
  if (!diag_.empty() && diag_.size() != base.rows()) throw Error(Errc::dimension_mismatch, "diagonal length");
  if (frac_bits < 0) throw Error(Errc::invalid_argument, "negative fractional bits");
}

BigInt DyadicOperator::entry_bound() const {
  BigInt m = 0;
  for (const auto& d : diag_) m = std::max(m, BigInt(abs(d)));
  BigInt num = abs(scale_) * base_->entry_bound() + m;
  BigInt den = shift_left(BigInt(1), static_cast<std::size_t>(frac_bits_));
  BigInt q = floor_div(num + den - 1, den);
  return q < 1 ? BigInt(1) : q;
}

DyadicOperator DyadicOperator::plus_diagonal(const IntVector& extra, int extra_bits) const {
  if (extra.size() != dim()) throw Error(Errc::dimension_mismatch, "diagonal length");
  int bits = std::max(frac_bits_, extra_bits);
  std::size_t up = static_cast<std::size_t>(bits - frac_bits_);
  std::size_t up_extra = static_cast<std::size_t>(bits - extra_bits);
  IntVector diag(dim(), BigInt(0));
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!diag_.empty()) diag[i] = shift_left(diag_[i], up);
    diag[i] += shift_left(extra[i], up_extra);
  }
  return DyadicOperator(*base_, shift_left(scale_, up), std::move(diag), bits);
}

ShiftedOperator DyadicOperator::numerator(const FixedL& shift, int& bits) const {
  bits = std::max(frac_bits_, shift.frac_bits());
  std::size_t up = static_cast<std::size_t>(bits - frac_bits_);
  IntVector diag;
  for (const auto& d : diag_) diag.push_back(shift_left(d, up));
  return ShiftedOperator(*base_, shift_left(scale_, up), std::move(diag), shift.widened(bits).scaled());
}

std::vector<std::vector<Rational>> DyadicOperator::dense() const {
  auto base = materialize(*base_);
  std::size_t n = dim();
  std::vector<std::vector<Rational>> out(n, std::vector<Rational>(n));
  Rational den = Rational(shift_left(BigInt(1), static_cast<std::size_t>(frac_bits_)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      BigInt v = scale_ * base[i][j];
      if (i == j && !diag_.empty()) v += diag_[i];
      out[i][j] = Rational(v) / den;
    }
  }
  return out;
}

std::size_t inv_power_iterations(std::size_t n, double eps) {
  double eps_s = eps / 4.0;
  return static_cast<std::size_t>(std::ceil(28.0 * std::log(4.0 * static_cast<double>(n) / eps_s) / eps));
}

std::size_t inv_power_gap_iterations(std::size_t n, double eps) {
  double nd = static_cast<double>(n);
  return static_cast<std::size_t>(std::ceil(std::log(40.0 * std::pow(nd, 6.0) / (eps * eps)) / 0.1));
}

InvPowerResult inv_power(const DyadicOperator& a, const FixedL& shift, double eps, double delta, Rng& rng,
                         const InvPowerOptions& opts) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::invalid_argument, "epsilon must lie in (0, 1)");
  if (!(delta > 0.0)) throw Error(Errc::invalid_argument, "delta must be positive");
  RunConfig cfg;
  cfg.eps = eps;
  cfg.eps_s = eps / 4.0;
  cfg.delta = delta;
  cfg.iterations = opts.iterations ? opts.iterations : inv_power_iterations(a.dim(), eps);
  cfg.stop_below = opts.stop_below;
  cfg.stop_above = opts.stop_above;
  cfg.c = opts.c;
  return run_inverse_power(a, shift, cfg, rng);
}

FloatL inv_power(const SparseMatrix& a, double eps, double delta, Rng& rng) {
  SparseOperator op(a);
  return inv_power(DyadicOperator(op), FixedL(), eps, delta, rng).value;
}

InvPowerResult inv_power_gap(const DyadicOperator& a, const FixedL& shift, double eps, double delta, Rng& rng) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::invalid_argument, "epsilon must lie in (0, 1)");
  if (!(delta > 0.0)) throw Error(Errc::invalid_argument, "delta must be positive");
  RunConfig cfg;
  cfg.eps = eps;
  cfg.eps_s = 0.1;
  cfg.delta = delta;
  cfg.iterations = inv_power_gap_iterations(a.dim(), eps);
  cfg.keep_vector = true;
  return run_inverse_power(a, shift, cfg, rng);
}

InvPowerResult inv_power_gap(const SparseMatrix& a, double eps, double delta, Rng& rng) {
  SparseOperator op(a);
  return inv_power_gap(DyadicOperator(op), FixedL(), eps, delta, rng);
}

DyadicOperator perturb_spectrum(const DyadicOperator& a, double eps, double gamma, Rng& rng) {
  if (!(eps > 0.0) || !(gamma > 0.0)) throw Error(Errc::invalid_argument, "perturbation parameters must be positive");
  int bits = static_cast<int>(std::ceil(std::log2(1.0 / gamma))) + 2;
  bits = std::max(bits, 1);
  // Largest k with k / 2^bits <= eps / 2.
  BigInt top = BigInt(floor_div(shift_left(Rational(eps / 2.0).get_num(), static_cast<std::size_t>(bits)),
                                Rational(eps / 2.0).get_den()));
  IntVector d(a.dim());
  for (auto& x : d) x = rng.uniform(BigInt(0), top);
  return a.plus_diagonal(d, bits);
}

Decision shift_invert(const DyadicOperator& b, const FixedL& lo, const FixedL& hi, Rng& rng) {
  FixedL mid = (lo + hi).half();
  double half_width = (hi - lo).half().to_double();
  if (!(half_width > 0.0)) throw Error(Errc::invalid_argument, "empty interval");
  InvPowerOptions opts;
  opts.stop_below = 1.2 * half_width;
  opts.stop_above = half_width;
  InvPowerResult r = inv_power(b, mid, 0.1, half_width, rng, opts);
  if (r.singular || r.hit_delta) return Decision::yes;
  if (r.certified_above) return Decision::no;
  return r.value.to_double() < 1.2 * half_width ? Decision::yes : Decision::no;
}

}  // namespace lospace
