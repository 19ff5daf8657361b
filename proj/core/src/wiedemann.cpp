#include "lospace/wiedemann.hpp"

#include <algorithm>
#include <cmath>

#include "lospace/error.hpp"
#include "lospace/workspace.hpp"

namespace lospace {

namespace {

std::int64_t field_bits(std::size_t count, const Modulus& mod) {
  return static_cast<std::int64_t>(count) * mod.elem_bits();
}

bool all_zero(std::span<const FpElem> v) {
  return std::all_of(v.begin(), v.end(), [](FpElem x) { return x == 0; });
}

void random_fill(std::span<FpElem> v, const Modulus& mod, Rng& rng) {
  for (auto& x : v) x = rng.uniform(0, mod.value() - 1);
}

std::size_t kernel_budget(double delta, std::uint64_t p) {
  double d = std::clamp(delta, 1e-300, 0.5);
  double extra = std::ceil(std::log(2.0 / d) / std::log(static_cast<double>(p)));
  return static_cast<std::size_t>(std::ceil(48.0 * std::log(2.0 / d)) + std::max(extra, 1.0));
}

// Kernel vector from a factor f of the minimal polynomial: strip X^c, form y = f(A) z,
// then walk y, Ay, A^2y, ... until the next step vanishes.
bool kernel_from_factor(const ModOperator& a, const FpPoly& f, Rng& rng, FpVector& out) {
  const Modulus& mod = a.modulus();
  std::size_t n = a.cols();
  std::size_t c = 0;
  while (c < f.size() && f[c] == 0) ++c;
  std::span<const FpElem> stripped = std::span<const FpElem>(f).subspan(c);
  Charge charge("kernel", field_bits(3 * n, mod));
  FpVector z(n), y(n), w(n);
  random_fill(z, mod, rng);
  apply_poly(a, stripped, z, y);
  if (all_zero(y)) return false;
  for (std::size_t t = 0; t <= n; ++t) {
    a.apply(y, w);
    if (all_zero(w)) {
      out = std::move(y);
      return true;
    }
    std::swap(y, w);
  }
  return false;
}

}  // namespace

FpPoly berlekamp_massey(std::span<const FpElem> seq, const Modulus& mod) {
  std::size_t n = seq.size();
  Charge charge("berlekamp_massey", field_bits(3 * (n + 1), mod));
  FpPoly c(n + 1, 0), b(n + 1, 0), tmp;
  c[0] = b[0] = 1;
  std::size_t len = 0, shift = 1;
  FpElem last = 1;
  for (std::size_t i = 0; i < n; ++i, ++shift) {
    FpElem d = seq[i];
    for (std::size_t j = 1; j <= len; ++j) d = mod.add(d, mod.mul(c[j], seq[i - j]));
    if (d == 0) continue;
    FpElem coef = mod.mul(d, mod.inv(last));
    bool grow = 2 * len <= i;
    if (grow) tmp = c;
    for (std::size_t j = shift; j <= n; ++j) c[j] = mod.sub(c[j], mod.mul(coef, b[j - shift]));
    if (!grow) continue;
    len = i + 1 - len;
    b = std::move(tmp);
    last = d;
    shift = 0;
  }
  // Connection polynomial 1 + c_1 x + ... + c_L x^L reversed into a monic recurrence.
  FpPoly g(len + 1, 0);
  for (std::size_t i = 0; i <= len; ++i) g[i] = c[len - i];
  return g;
}

FpPoly wiedemann_run(const ModOperator& a, Rng& rng) {
  const Modulus& mod = a.modulus();
  std::size_t n = a.cols();
  if (a.rows() != n) throw Error(Errc::dimension_mismatch, "minimal polynomial of a non-square operator");
  FpVector seq(2 * n + 1);
  {
    Charge charge("wiedemann", field_bits(3 * n + seq.size(), mod));
    FpVector x(n), y(n), next(n);
    random_fill(x, mod, rng);
    random_fill(y, mod, rng);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      FpElem acc = 0;
      for (std::size_t k = 0; k < n; ++k) acc = mod.add(acc, mod.mul(x[k], y[k]));
      seq[i] = acc;
      if (i + 1 < seq.size()) {
        a.apply(y, next);
        std::swap(y, next);
      }
    }
  }
  Charge charge("wiedemann", field_bits(seq.size(), mod));
  return berlekamp_massey(seq, mod);
}

FpPoly minimal_polynomial(const ModOperator& a, std::size_t boost, Rng& rng) {
  FpPoly best{1};
  for (std::size_t t = 0; t < std::max<std::size_t>(boost, 1); ++t) {
    FpPoly f = wiedemann_run(a, rng);
    if (f.size() > best.size()) best = std::move(f);
    if (best.size() == a.cols() + 1) break;
  }
  return best;
}

FpPoly minimal_polynomial(const LinearOperator& a, const Modulus& mod, std::size_t boost, Rng& rng) {
  auto reduced = a.reduce(mod);
  return minimal_polynomial(*reduced, boost, rng);
}

std::size_t boost_count(double delta) {
  double d = std::clamp(delta, 1e-300, 0.5);
  return static_cast<std::size_t>(std::ceil(48.0 * std::log(1.0 / d)));
}

void apply_poly(const ModOperator& a, std::span<const FpElem> f, std::span<const FpElem> z, std::span<FpElem> out) {
  const Modulus& mod = a.modulus();
  std::size_t n = z.size();
  if (f.empty()) {
    std::fill(out.begin(), out.end(), 0);
    return;
  }
  Charge charge("horner", field_bits(n, mod));
  FpVector tmp(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = mod.mul(f.back(), z[k]);
  for (std::size_t i = f.size() - 1; i-- > 0;) {
    a.apply(out, tmp);
    for (std::size_t k = 0; k < n; ++k) out[k] = mod.add(tmp[k], mod.mul(f[i], z[k]));
  }
}

FpVector find_kernel(const ModOperator& a, double delta, Rng& rng) {
  std::size_t budget = kernel_budget(delta, a.modulus().value());
  FpVector v;
  for (std::size_t attempt = 0; attempt < budget; ++attempt) {
    FpPoly f = wiedemann_run(a, rng);
    if (kernel_from_factor(a, f, rng, v)) return v;
  }
  throw Error(Errc::retries_exhausted, "no kernel vector found");
}

FpVector find_kernel(const LinearOperator& a, const Modulus& mod, double delta, Rng& rng) {
  auto reduced = a.reduce(mod);
  return find_kernel(*reduced, delta, rng);
}

FpVector linsolve_zp(const ModOperator& a, std::span<const FpElem> b, double delta, Rng& rng) {
  const Modulus& mod = a.modulus();
  std::size_t n = a.cols();
  if (b.size() != a.rows() || a.rows() != n) throw Error(Errc::dimension_mismatch, "linsolve_zp dimensions");
  AugmentedMod aug(a, b);
  FpVector k = find_kernel(aug, delta, rng);
  if (k[n] == 0) throw Error(Errc::retries_exhausted, "operator is singular modulo p");
  FpElem inv = mod.inv(k[n]);
  k.pop_back();
  for (auto& x : k) x = mod.mul(x, inv);
  Charge charge("linsolve_zp", field_bits(n, mod));
  FpVector check(n);
  a.apply(k, check);
  if (!std::equal(check.begin(), check.end(), b.begin())) {
    throw Error(Errc::retries_exhausted, "solution failed verification");
  }
  return k;
}

FpVector linsolve_zp(const LinearOperator& a, std::span<const FpElem> b, const Modulus& mod, double delta,
                     Rng& rng) {
  auto reduced = a.reduce(mod);
  return linsolve_zp(*reduced, b, delta, rng);
}

FpElem determinant_zp(const ModOperator& a, double delta, Rng& rng) {
  const Modulus& mod = a.modulus();
  std::size_t n = a.cols();
  if (a.rows() != n) throw Error(Errc::dimension_mismatch, "determinant of a non-square operator");
  if (n == 0) return 1;
  double d = std::clamp(delta, 1e-300, 0.5);
  std::size_t runs = static_cast<std::size_t>(std::ceil(18.0 * std::log(1.0 / d)));
  Charge charge("determinant_zp", field_bits(n, mod));
  FpVector diag(n);
  FpVector kernel;
  for (std::size_t run = 0; run < runs; ++run) {
    for (auto& x : diag) x = rng.uniform(1, mod.value() - 1);
    DiagScaledMod da(a, diag);
    FpPoly f = wiedemann_run(da, rng);
    if (f.size() == n + 1) {
      // f is the characteristic polynomial of DA: det(DA) = (-1)^n f(0).
      FpElem det = n % 2 ? mod.neg(f[0]) : f[0];
      FpElem prod = 1;
      for (FpElem x : diag) prod = mod.mul(prod, x);
      return mod.mul(det, mod.inv(prod));
    }
    // A verified kernel vector of DA certifies det(A) = 0 mod p.
    if (kernel_from_factor(da, f, rng, kernel)) return 0;
  }
  return 0;
}

FpElem determinant_zp(const LinearOperator& a, const Modulus& mod, double delta, Rng& rng) {
  auto reduced = a.reduce(mod);
  return determinant_zp(*reduced, delta, rng);
}

PolySolver::PolySolver(const ModOperator& a, double delta, Rng rng) : a_(a), delta_(delta), rng_(rng) {
  if (a.rows() != a.cols()) throw Error(Errc::dimension_mismatch, "solver for a non-square operator");
  refresh();
}

void PolySolver::refresh() {
  FpPoly f = minimal_polynomial(a_, std::min<std::size_t>(boost_count(delta_), 8), rng_);
  if (f.size() > mu_.size()) mu_ = std::move(f);
}

FpVector PolySolver::solve(std::span<const FpElem> b) {
  const Modulus& mod = a_.modulus();
  std::size_t n = a_.cols();
  if (b.size() != n) throw Error(Errc::dimension_mismatch, "right-hand side length");
  FpVector x(n, 0);
  Charge charge("poly_solver", field_bits(2 * n + mu_.size(), mod));
  if (mu_.size() >= 2 && mu_[0] != 0) {
    apply_poly(a_, std::span<const FpElem>(mu_).subspan(1), b, x);
    FpElem scale = mod.neg(mod.inv(mu_[0]));
    for (auto& v : x) v = mod.mul(v, scale);
    FpVector check(n);
    a_.apply(x, check);
    if (std::equal(check.begin(), check.end(), b.begin())) return x;
  } else if (all_zero(b)) {
    return x;
  }
  ++fallbacks_;
  x = linsolve_zp(a_, b, delta_, rng_);
  refresh();
  return x;
}

}  // namespace lospace
