#include <algorithm>
#include <cmath>

#include "lospace/error.hpp"
#include "lospace/spectral.hpp"
#include "lospace/workspace.hpp"
#include "spectral_internal.hpp"

namespace lospace {

namespace {

int bits_for(double width) { return std::max(1, static_cast<int>(std::ceil(-std::log2(width))) + 8); }

}  // namespace

void eigendecompose(const DyadicOperator& a, double eps, Rng& rng, const EigenSink& sink, const EigenOptions& opts) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::invalid_argument, "epsilon must lie in (0, 1)");
  std::size_t n = a.dim();
  double nd = static_cast<double>(n);
  double bound = std::max(1.0, std::exp2(detail::log2_of(a.entry_bound())));
  double gamma = eps * eps / (4.0 * nd * nd * nd * nd * bound);
  double vector_eps = std::pow(eps / (60.0 * nd * bound), 2.0);

  for (std::size_t attempt = 0; attempt < 2; ++attempt) {
    Rng r = rng.derive("eigen-attempt", attempt);
    Rng perturb_rng = r.derive("perturb");
    DyadicOperator b = perturb_spectrum(a, eps / 2.0, gamma, perturb_rng);
    // b is already separated by gamma, so its eigenvalues are searched directly to gamma / 10.
    Rng search = r.derive("search");
    auto values = detail::separated_spectrum(b, gamma, gamma / 16.0, search, nullptr, opts.spectrum);
    if (!values) continue;

    FixedL offset = FixedL::from_double(gamma / 5.0, bits_for(gamma));
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t i = opts.descending ? n - 1 - k : k;
      const FixedL& value = (*values)[i];
      FixedL shift = value + offset;
      InvPowerResult res;
      for (std::size_t nudge = 0;; ++nudge) {
        Rng vec_rng = r.derive("vector", i * 4 + nudge);
        res = inv_power_gap(b, shift, vector_eps, gamma / 10.0, vec_rng);
        if (!res.singular) break;
        if (nudge == 3) throw Error(Errc::retries_exhausted, "shift coincides with an eigenvalue");
        shift = shift + FixedL::from_double(gamma / 64.0, bits_for(gamma));
      }
      EigenPair pair;
      pair.index = i;
      pair.value = value;
      pair.vector = std::move(res.vector);
      sink(pair);
    }
    return;
  }
  throw Error(Errc::result_count_mismatch, "spectrum leaf count differs from the dimension");
}

void eigendecompose(const SparseMatrix& a, double eps, Rng& rng, const EigenSink& sink, const EigenOptions& opts) {
  if (!a.is_symmetric()) throw Error(Errc::invalid_argument, "matrix must be symmetric");
  SparseOperator op(a);
  eigendecompose(DyadicOperator(op), eps, rng, sink, opts);
}

int svd_shift_exponent(std::size_t n, const BigInt& bound, double eps) {
  double nd = static_cast<double>(n);
  double u = std::max(1.0, std::exp2(detail::log2_of(bound)));
  return static_cast<int>(std::ceil(std::log2(60.0 * nd * nd * u / eps)));
}

void svd(const SparseMatrix& a, double eps, Rng& rng, const SvdSink& sink, const SpectrumOptions& opts) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::invalid_argument, "epsilon must lie in (0, 1)");
  std::size_t n = a.rows();
  std::size_t m = a.cols();
  if (n < m) throw Error(Errc::dimension_mismatch, "svd needs at least as many rows as columns");
  int k = svd_shift_exponent(n, from_i64(a.entry_bound()), eps);
  // 2^k A A^T + I over 2^k, i.e. A A^T + 2^-k I.
  GramTOperator gram(a, shift_left(BigInt(1), static_cast<std::size_t>(k)), BigInt(1));
  DyadicOperator shifted(gram, BigInt(1), {}, k);
  double eps0 = std::ldexp(1.0, -k);

  EigenOptions eopts;
  eopts.descending = true;
  eopts.spectrum = opts;
  std::size_t emitted = 0;
  const int out_bits = 64 + k;
  Charge charge("svd-column", 0);
  eigendecompose(shifted, eps0 / 10.0, rng, [&](const EigenPair& pair) {
    SingularTriple t;
    t.index = emitted;
    t.left = pair.vector;
    if (emitted < m) {
      t.has_value = true;
      // sigma = sqrt(lambda) to out_bits fractional bits.
      FixedL lam = pair.value.widened(std::max(pair.value.frac_bits(), 2 * out_bits)).rounded(2 * out_bits);
      BigInt lam_scaled = lam.sign() > 0 ? lam.scaled() : BigInt(0);
      BigInt root = isqrt(lam_scaled);
      t.sigma = FixedL(root, out_bits);
      // v = A^T u / sigma, with u in fixed point.
      int frac = 0;
      for (const auto& x : pair.vector) frac = std::max(frac, x.frac_bits());
      IntVector u(n);
      for (std::size_t j = 0; j < n; ++j) u[j] = pair.vector[j].widened(frac).scaled();
      IntVector atu(m, BigInt(0));
      for (const Entry& e : a.entries()) atu[e.col] += e.value * u[e.row];
      std::int64_t bits = 0;
      for (const auto& x : atu) bits += static_cast<std::int64_t>(storage_bits(x));
      charge.resize(bits);
      t.right.resize(m);
      for (std::size_t j = 0; j < m; ++j) {
        if (sgn(root) == 0) {
          t.right[j] = FixedL(BigInt(0), frac);
          continue;
        }
        // atu_j / 2^frac / (root / 2^out_bits), rounded to frac bits.
        t.right[j] = FixedL(round_div(shift_left(atu[j], static_cast<std::size_t>(out_bits)), root), frac);
      }
    }
    ++emitted;
    sink(t);
  }, eopts);
}

}  // namespace lospace
