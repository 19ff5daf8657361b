#include "lospace/linop.hpp"

#include <algorithm>

#include "lospace/error.hpp"
#include "lospace/workspace.hpp"

namespace lospace {

namespace {

using u128 = unsigned __int128;

void check_dim(std::size_t got, std::size_t want) {
  if (got != want) throw Error(Errc::dimension_mismatch, "vector length does not match operator");
}

BigInt max_abs(std::span<const BigInt> v) {
  BigInt m = 0;
  for (const auto& x : v) {
    if (abs(x) > m) m = abs(x);
  }
  return m;
}

class SparseMod final : public ModOperator {
 public:
  SparseMod(const SparseMatrix& a, const Modulus& mod)
      : ModOperator(mod), a_(a), small_(a.entry_bound() < (std::int64_t{1} << 32)) {}
  std::size_t rows() const override { return a_.rows(); }
  std::size_t cols() const override { return a_.cols(); }

  void apply(std::span<const FpElem> in, std::span<FpElem> out) const override {
    std::fill(out.begin(), out.end(), 0);
    const auto& entries = a_.entries();
    const std::uint64_t p = mod_.value();
    if (small_) {
      // Products stay below 2^94, so a row can be accumulated before reducing.
      std::size_t k = 0;
      while (k < entries.size()) {
        std::size_t row = entries[k].row;
        u128 pos = 0, neg = 0;
        for (; k < entries.size() && entries[k].row == row; ++k) {
          const Entry& e = entries[k];
          if (e.value >= 0) {
            pos += static_cast<u128>(static_cast<std::uint64_t>(e.value)) * in[e.col];
          } else {
            neg += static_cast<u128>(static_cast<std::uint64_t>(-e.value)) * in[e.col];
          }
        }
        out[row] = mod_.sub(static_cast<FpElem>(pos % p), static_cast<FpElem>(neg % p));
      }
      return;
    }
    for (const Entry& e : entries) out[e.row] = mod_.add(out[e.row], mod_.mul(mod_.reduce(e.value), in[e.col]));
  }

 private:
  const SparseMatrix& a_;
  bool small_;
};

class DiagScaledReduced final : public ModOperator {
 public:
  DiagScaledReduced(std::unique_ptr<ModOperator> inner, FpVector d)
      : ModOperator(inner->modulus()), inner_(std::move(inner)), d_(std::move(d)),
        charge_("operator", static_cast<std::int64_t>(d_.size()) * mod_.elem_bits()) {}
  std::size_t rows() const override { return inner_->rows(); }
  std::size_t cols() const override { return inner_->cols(); }
  void apply(std::span<const FpElem> in, std::span<FpElem> out) const override {
    inner_->apply(in, out);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = mod_.mul(d_[i], out[i]);
  }

 private:
  std::unique_ptr<ModOperator> inner_;
  FpVector d_;
  Charge charge_;
};

class ShiftedMod final : public ModOperator {
 public:
  ShiftedMod(std::unique_ptr<ModOperator> inner, FpElem scale, FpVector diag, FpElem shift)
      : ModOperator(inner->modulus()), inner_(std::move(inner)), scale_(scale), diag_(std::move(diag)),
        shift_(shift), charge_("operator", static_cast<std::int64_t>(diag_.size() + 2) * mod_.elem_bits()) {}
  std::size_t rows() const override { return inner_->rows(); }
  std::size_t cols() const override { return inner_->cols(); }
  void apply(std::span<const FpElem> in, std::span<FpElem> out) const override {
    inner_->apply(in, out);
    for (std::size_t i = 0; i < out.size(); ++i) {
      FpElem d = diag_.empty() ? 0 : diag_[i];
      out[i] = mod_.add(mod_.mul(scale_, out[i]), mod_.mul(mod_.sub(d, shift_), in[i]));
    }
  }

 private:
  std::unique_ptr<ModOperator> inner_;
  FpElem scale_;
  FpVector diag_;
  FpElem shift_;
  Charge charge_;
};

class AugmentedReduced final : public ModOperator {
 public:
  AugmentedReduced(std::unique_ptr<ModOperator> inner, FpVector b)
      : ModOperator(inner->modulus()), inner_(std::move(inner)), b_(std::move(b)), view_(*inner_, b_),
        charge_("operator", static_cast<std::int64_t>(b_.size()) * mod_.elem_bits()) {}
  std::size_t rows() const override { return view_.rows(); }
  std::size_t cols() const override { return view_.cols(); }
  void apply(std::span<const FpElem> in, std::span<FpElem> out) const override { view_.apply(in, out); }

 private:
  std::unique_ptr<ModOperator> inner_;
  FpVector b_;
  AugmentedMod view_;
  Charge charge_;
};

class GramMod final : public ModOperator {
 public:
  GramMod(const SparseMatrix& a, const Modulus& mod) : ModOperator(mod), a_(a) {}
  std::size_t rows() const override { return a_.cols(); }
  std::size_t cols() const override { return a_.cols(); }
  void apply(std::span<const FpElem> in, std::span<FpElem> out) const override {
    const auto& entries = a_.entries();
    for (std::size_t i = 0; i < out.size(); ++i) {
      FpElem acc = 0;
      for (const Entry& e : entries) {
        if (e.col != i) continue;
        auto [first, last] = a_.row_range(e.row);
        FpElem dot = 0;
        for (std::size_t k = first; k < last; ++k) {
          dot = mod_.add(dot, mod_.mul(mod_.reduce(entries[k].value), in[entries[k].col]));
        }
        acc = mod_.add(acc, mod_.mul(mod_.reduce(e.value), dot));
      }
      out[i] = acc;
    }
  }

 private:
  const SparseMatrix& a_;
};

class GramTMod final : public ModOperator {
 public:
  GramTMod(const SparseMatrix& a, const Modulus& mod, FpElem scale, FpElem c)
      : ModOperator(mod), a_(a), scale_(scale), c_(c) {}
  std::size_t rows() const override { return a_.rows(); }
  std::size_t cols() const override { return a_.rows(); }
  void apply(std::span<const FpElem> in, std::span<FpElem> out) const override {
    FpVector w(a_.cols(), 0);
    Charge charge("gram_t", static_cast<std::int64_t>(w.size()) * mod_.elem_bits());
    for (const Entry& e : a_.entries()) w[e.col] = mod_.add(w[e.col], mod_.mul(mod_.reduce(e.value), in[e.row]));
    std::fill(out.begin(), out.end(), 0);
    for (const Entry& e : a_.entries()) out[e.row] = mod_.add(out[e.row], mod_.mul(mod_.reduce(e.value), w[e.col]));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = mod_.add(mod_.mul(scale_, out[i]), mod_.mul(c_, in[i]));
  }

 private:
  const SparseMatrix& a_;
  FpElem scale_;
  FpElem c_;
};

}  // namespace

FpVector apply_mod(const LinearOperator& op, std::span<const FpElem> v, const Modulus& mod) {
  check_dim(v.size(), op.cols());
  auto reduced = op.reduce(mod);
  FpVector out(op.rows());
  reduced->apply(v, out);
  return out;
}

IntVector apply_int(const LinearOperator& op, std::span<const BigInt> v) {
  check_dim(v.size(), op.cols());
  return op.apply_int(v);
}

IntVector SparseOperator::apply_int(std::span<const BigInt> v) const {
  IntVector out(a_.rows(), 0);
  for (const Entry& e : a_.entries()) {
    if (e.value >= 0) {
      mpz_addmul_ui(out[e.row].get_mpz_t(), v[e.col].get_mpz_t(), static_cast<unsigned long>(e.value));
    } else {
      mpz_submul_ui(out[e.row].get_mpz_t(), v[e.col].get_mpz_t(), static_cast<unsigned long>(-e.value));
    }
  }
  return out;
}

std::unique_ptr<ModOperator> SparseOperator::reduce(const Modulus& mod) const {
  return std::make_unique<SparseMod>(a_, mod);
}

DiagScaledOperator::DiagScaledOperator(const LinearOperator& a, IntVector d) : a_(a), d_(std::move(d)) {
  check_dim(d_.size(), a_.rows());
}

IntVector DiagScaledOperator::apply_int(std::span<const BigInt> v) const {
  IntVector out = a_.apply_int(v);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= d_[i];
  return out;
}

std::unique_ptr<ModOperator> DiagScaledOperator::reduce(const Modulus& mod) const {
  FpVector d(d_.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = mod.reduce(d_[i]);
  return std::make_unique<DiagScaledReduced>(a_.reduce(mod), std::move(d));
}

BigInt DiagScaledOperator::entry_bound() const { return max_abs(d_) * a_.entry_bound(); }

ShiftedOperator::ShiftedOperator(const LinearOperator& a, BigInt scale, IntVector diag, BigInt shift)
    : a_(a), scale_(std::move(scale)), diag_(std::move(diag)), shift_(std::move(shift)) {
  if (!a_.is_square()) throw Error(Errc::dimension_mismatch, "shift of a non-square operator");
  if (!diag_.empty()) check_dim(diag_.size(), a_.rows());
}

IntVector ShiftedOperator::apply_int(std::span<const BigInt> v) const {
  IntVector out = a_.apply_int(v);
  for (std::size_t i = 0; i < out.size(); ++i) {
    mpz_ptr o = out[i].get_mpz_t();
    mpz_mul(o, o, scale_.get_mpz_t());
    if (!diag_.empty()) mpz_addmul(o, diag_[i].get_mpz_t(), v[i].get_mpz_t());
    mpz_submul(o, shift_.get_mpz_t(), v[i].get_mpz_t());
  }
  return out;
}

std::unique_ptr<ModOperator> ShiftedOperator::reduce(const Modulus& mod) const {
  FpVector diag(diag_.size());
  for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = mod.reduce(diag_[i]);
  return std::make_unique<ShiftedMod>(a_.reduce(mod), mod.reduce(scale_), std::move(diag), mod.reduce(shift_));
}

BigInt ShiftedOperator::entry_bound() const { return abs(scale_) * a_.entry_bound() + max_abs(diag_) + abs(shift_); }

AugmentedOperator::AugmentedOperator(const LinearOperator& a, std::span<const BigInt> b) : a_(a), b_(b) {
  if (!a_.is_square()) throw Error(Errc::dimension_mismatch, "augment of a non-square operator");
  check_dim(b_.size(), a_.rows());
}

IntVector AugmentedOperator::apply_int(std::span<const BigInt> v) const {
  std::size_t n = a_.cols();
  IntVector out = a_.apply_int(v.first(n));
  for (std::size_t i = 0; i < n; ++i) out[i] -= v[n] * b_[i];
  out.push_back(0);
  return out;
}

std::unique_ptr<ModOperator> AugmentedOperator::reduce(const Modulus& mod) const {
  FpVector b(b_.size());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = mod.reduce(b_[i]);
  return std::make_unique<AugmentedReduced>(a_.reduce(mod), std::move(b));
}

BigInt AugmentedOperator::entry_bound() const { return std::max(a_.entry_bound(), max_abs(b_)); }

IntVector GramOperator::apply_int(std::span<const BigInt> v) const {
  const auto& entries = a_.entries();
  IntVector out(a_.cols(), 0);
  BigInt dot;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const Entry& e : entries) {
      if (e.col != i) continue;
      auto [first, last] = a_.row_range(e.row);
      dot = 0;
      for (std::size_t k = first; k < last; ++k) dot += entries[k].value * v[entries[k].col];
      out[i] += e.value * dot;
    }
  }
  return out;
}

std::unique_ptr<ModOperator> GramOperator::reduce(const Modulus& mod) const {
  return std::make_unique<GramMod>(a_, mod);
}

BigInt GramOperator::entry_bound() const {
  BigInt u = from_i64(a_.entry_bound());
  return from_u64(a_.rows()) * u * u;
}

GramTOperator::GramTOperator(const SparseMatrix& a, BigInt scale, BigInt c)
    : a_(a), scale_(std::move(scale)), c_(std::move(c)) {}

IntVector GramTOperator::apply_int(std::span<const BigInt> v) const {
  IntVector w(a_.cols(), 0);
  for (const Entry& e : a_.entries()) w[e.col] += e.value * v[e.row];
  IntVector out(a_.rows(), 0);
  for (const Entry& e : a_.entries()) out[e.row] += e.value * w[e.col];
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale_ * out[i] + c_ * v[i];
  return out;
}

std::unique_ptr<ModOperator> GramTOperator::reduce(const Modulus& mod) const {
  return std::make_unique<GramTMod>(a_, mod, mod.reduce(scale_), mod.reduce(c_));
}

BigInt GramTOperator::entry_bound() const {
  BigInt u = from_i64(a_.entry_bound());
  return abs(scale_) * from_u64(a_.cols()) * u * u + abs(c_);
}

AugmentedOperator augment(const LinearOperator& a, std::span<const BigInt> b) { return AugmentedOperator(a, b); }
GramOperator gram(const SparseMatrix& a) { return GramOperator(a); }
GramTOperator gram_t(const SparseMatrix& a, const BigInt& c) { return GramTOperator(a, 1, c); }
ShiftedOperator shift(const LinearOperator& a, const BigInt& c) { return ShiftedOperator(a, 1, {}, c); }

DiagScaledMod::DiagScaledMod(const ModOperator& inner, std::span<const FpElem> d)
    : ModOperator(inner.modulus()), inner_(inner), d_(d) {
  check_dim(d_.size(), inner_.rows());
}

void DiagScaledMod::apply(std::span<const FpElem> in, std::span<FpElem> out) const {
  inner_.apply(in, out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mod_.mul(d_[i], out[i]);
}

AugmentedMod::AugmentedMod(const ModOperator& inner, std::span<const FpElem> b)
    : ModOperator(inner.modulus()), inner_(inner), b_(b) {
  check_dim(b_.size(), inner_.rows());
}

void AugmentedMod::apply(std::span<const FpElem> in, std::span<FpElem> out) const {
  std::size_t n = inner_.cols();
  inner_.apply(in.first(n), out.first(n));
  FpElem t = in[n];
  for (std::size_t i = 0; i < n; ++i) out[i] = mod_.sub(out[i], mod_.mul(t, b_[i]));
  out[n] = 0;
}

std::vector<IntVector> materialize(const LinearOperator& op) {
  std::vector<IntVector> dense(op.rows(), IntVector(op.cols(), 0));
  IntVector unit(op.cols(), 0);
  for (std::size_t j = 0; j < op.cols(); ++j) {
    unit[j] = 1;
    IntVector col = op.apply_int(unit);
    for (std::size_t i = 0; i < op.rows(); ++i) dense[i][j] = col[i];
    unit[j] = 0;
  }
  return dense;
}

BigInt hadamard_bound(std::size_t n, const BigInt& bound) {
  BigInt col_sq = from_u64(n) * bound * bound;
  return isqrt(pow_int(col_sq, n)) + 1;
}

BigInt cramer_bound(std::size_t n, const BigInt& bound, std::span<const BigInt> b) {
  BigInt norm_sq = 0;
  for (const auto& x : b) norm_sq += x * x;
  BigInt col_sq = from_u64(n) * bound * bound;
  return (isqrt(norm_sq) + 1) * (isqrt(pow_int(col_sq, n == 0 ? 0 : n - 1)) + 1);
}

}  // namespace lospace
