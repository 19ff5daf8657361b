#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "lospace/bigint.hpp"
#include "lospace/fixed.hpp"
#include "lospace/float.hpp"
#include "lospace/linop.hpp"
#include "lospace/rng.hpp"
#include "lospace/sparse.hpp"

namespace lospace {

// Symmetric rational matrix (scale * base + diag(diag)) / 2^frac_bits over an integer
// base operator, which is borrowed.
class DyadicOperator {
 public:
  explicit DyadicOperator(const LinearOperator& base, BigInt scale = 1, IntVector diag = {}, int frac_bits = 0);

  std::size_t dim() const { return base_->rows(); }
  const LinearOperator& base() const { return *base_; }
  const BigInt& scale() const { return scale_; }
  const IntVector& diag() const { return diag_; }
  int frac_bits() const { return frac_bits_; }

  // Upper bound on |entry|, rounded up to an integer.
  BigInt entry_bound() const;
  // This plus diag(extra) / 2^extra_bits.
  DyadicOperator plus_diagonal(const IntVector& extra, int extra_bits) const;
  // Integer matrix 2^bits * (this - shift * I); `bits` receives the exponent.
  ShiftedOperator numerator(const FixedL& shift, int& bits) const;
  // Dense exact entries, for tests.
  std::vector<std::vector<Rational>> dense() const;

 private:
  const LinearOperator* base_;
  BigInt scale_;
  IntVector diag_;
  int frac_bits_;
};

struct InvPowerOptions {
  std::size_t iterations = 0;  // 0 selects the default count
  // Early exits used by the interval test. The estimate is an upper bound on the
  // smallest |eigenvalue|; the run ends once it drops below `stop_below`. `stop_above`
  // ends the run once the smallest |eigenvalue| is certified to exceed that value.
  double stop_below = 0.0;
  double stop_above = 0.0;
  double c = 2.0;
};

struct InvPowerResult {
  FloatL value;  // estimate of max(delta, min |eigenvalue|)
  bool singular = false;
  bool hit_delta = false;
  bool certified_above = false;
  std::size_t iterations = 0;
  std::vector<FixedL> vector;  // last normalized iterate (gap variant only)
};

// ceil(28 ln(4n / (eps/4)) / eps).
std::size_t inv_power_iterations(std::size_t n, double eps);
// ceil(ln(40 n^6 / eps^2) / 0.1).
std::size_t inv_power_gap_iterations(std::size_t n, double eps);

// Inverse power iteration on (a - shift I).
InvPowerResult inv_power(const DyadicOperator& a, const FixedL& shift, double eps, double delta, Rng& rng,
                         const InvPowerOptions& opts = {});
FloatL inv_power(const SparseMatrix& a, double eps, double delta, Rng& rng);

// Variant for a smallest eigenvalue separated by a factor 1.1 from the rest; also returns
// the last iterate, which approximates the corresponding unit eigenvector.
InvPowerResult inv_power_gap(const DyadicOperator& a, const FixedL& shift, double eps, double delta, Rng& rng);
InvPowerResult inv_power_gap(const SparseMatrix& a, double eps, double delta, Rng& rng);

// a + D with D diagonal, entries uniform dyadic in [0, eps/2] with ceil(log2(1/gamma))+2
// fractional bits.
DyadicOperator perturb_spectrum(const DyadicOperator& a, double eps, double gamma, Rng& rng);

enum class Decision { yes, no };

// NO: no eigenvalue in [lo, hi]. YES: an eigenvalue within a quarter width of it.
Decision shift_invert(const DyadicOperator& b, const FixedL& lo, const FixedL& hi, Rng& rng);

struct SpectrumStats {
  std::vector<std::size_t> internal_per_level;
  std::vector<std::size_t> nodes_per_level;
  std::size_t interval_tests = 0;
  std::size_t attempts = 0;
  double gamma = 0.0;
};

struct SpectrumOptions {
  unsigned threads = 1;  // interval tests of one level run concurrently when > 1
};

// All n eigenvalues within eps, ascending. Retries once with a fresh perturbation when
// the merged leaf count is not n.
std::vector<FixedL> spectrum(const DyadicOperator& a, double eps, Rng& rng, SpectrumStats* stats = nullptr,
                             const SpectrumOptions& opts = {});
std::vector<FixedL> spectrum(const SparseMatrix& a, double eps, Rng& rng, SpectrumStats* stats = nullptr,
                             const SpectrumOptions& opts = {});

struct EigenPair {
  std::size_t index = 0;  // position in ascending order
  FixedL value;
  std::vector<FixedL> vector;
};

using EigenSink = std::function<void(const EigenPair&)>;

struct EigenOptions {
  bool descending = false;
  SpectrumOptions spectrum;
};

// Streams the n eigenpairs to the sink one at a time.
void eigendecompose(const DyadicOperator& a, double eps, Rng& rng, const EigenSink& sink,
                    const EigenOptions& opts = {});
void eigendecompose(const SparseMatrix& a, double eps, Rng& rng, const EigenSink& sink,
                    const EigenOptions& opts = {});

struct SingularTriple {
  std::size_t index = 0;  // position in descending order
  bool has_value = false;  // false for left vectors beyond the column count
  FixedL sigma;
  std::vector<FixedL> left;
  std::vector<FixedL> right;
};

using SvdSink = std::function<void(const SingularTriple&)>;

// Thin SVD of an n x m matrix with n >= m from the eigenpairs of A A^T + eps0 I. Emits n
// left vectors in descending order; the first m carry sigma and the right vector.
void svd(const SparseMatrix& a, double eps, Rng& rng, const SvdSink& sink, const SpectrumOptions& opts = {});

// Largest power of two not above eps / (60 n^2 max(1, U)), as its exponent k (eps0 = 2^-k).
int svd_shift_exponent(std::size_t n, const BigInt& bound, double eps);

}  // namespace lospace
