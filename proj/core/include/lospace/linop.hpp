#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "lospace/bigint.hpp"
#include "lospace/modular.hpp"
#include "lospace/sparse.hpp"

namespace lospace {

using IntVector = std::vector<BigInt>;

enum class OperatorKind { base, diag_scale, shift, augment, gram, gram_t };

// An operator reduced modulo one prime. Per-prime residues of the operator's own
// parameters are computed once; the underlying matrix is never copied.
class ModOperator {
 public:
  explicit ModOperator(const Modulus& mod) : mod_(mod) {}
  virtual ~ModOperator() = default;

  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  // out = op * in (mod p); in and out must not alias.
  virtual void apply(std::span<const FpElem> in, std::span<FpElem> out) const = 0;

  const Modulus& modulus() const { return mod_; }

 protected:
  Modulus mod_;
};

// Black-box integer matrix. Composed operators borrow the operators and vectors they
// are built from; those must outlive them.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  virtual OperatorKind kind() const = 0;
  virtual IntVector apply_int(std::span<const BigInt> v) const = 0;
  virtual std::unique_ptr<ModOperator> reduce(const Modulus& mod) const = 0;
  // Upper bound on |entry|.
  virtual BigInt entry_bound() const = 0;

  bool is_square() const { return rows() == cols(); }
};

// Dimension-checked entry points.
FpVector apply_mod(const LinearOperator& op, std::span<const FpElem> v, const Modulus& mod);
IntVector apply_int(const LinearOperator& op, std::span<const BigInt> v);

class SparseOperator final : public LinearOperator {
 public:
  explicit SparseOperator(const SparseMatrix& a) : a_(a) {}
  std::size_t rows() const override { return a_.rows(); }
  std::size_t cols() const override { return a_.cols(); }
  OperatorKind kind() const override { return OperatorKind::base; }
  IntVector apply_int(std::span<const BigInt> v) const override;
  std::unique_ptr<ModOperator> reduce(const Modulus& mod) const override;
  BigInt entry_bound() const override { return from_i64(a_.entry_bound()); }
  const SparseMatrix& matrix() const { return a_; }

 private:
  const SparseMatrix& a_;
};

// diag(d) * A.
class DiagScaledOperator final : public LinearOperator {
 public:
  DiagScaledOperator(const LinearOperator& a, IntVector d);
  std::size_t rows() const override { return a_.rows(); }
  std::size_t cols() const override { return a_.cols(); }
  OperatorKind kind() const override { return OperatorKind::diag_scale; }
  IntVector apply_int(std::span<const BigInt> v) const override;
  std::unique_ptr<ModOperator> reduce(const Modulus& mod) const override;
  BigInt entry_bound() const override;

 private:
  const LinearOperator& a_;
  IntVector d_;
};

// scale * A + diag(diag) - shift * I. Covers plain shifts A - cI and the scaled
// diagonal perturbations used by the spectral routines.
class ShiftedOperator final : public LinearOperator {
 public:
  ShiftedOperator(const LinearOperator& a, BigInt scale, IntVector diag, BigInt shift);
  std::size_t rows() const override { return a_.rows(); }
  std::size_t cols() const override { return a_.cols(); }
  OperatorKind kind() const override { return OperatorKind::shift; }
  IntVector apply_int(std::span<const BigInt> v) const override;
  std::unique_ptr<ModOperator> reduce(const Modulus& mod) const override;
  BigInt entry_bound() const override;

  const LinearOperator& base() const { return a_; }
  const BigInt& scale() const { return scale_; }
  const IntVector& diag() const { return diag_; }
  const BigInt& shift() const { return shift_; }

 private:
  const LinearOperator& a_;
  BigInt scale_;
  IntVector diag_;  // empty means zero
  BigInt shift_;
};

// [[A, -b], [0, 0]] of size (n+1) x (n+1).
class AugmentedOperator final : public LinearOperator {
 public:
  AugmentedOperator(const LinearOperator& a, std::span<const BigInt> b);
  std::size_t rows() const override { return a_.rows() + 1; }
  std::size_t cols() const override { return a_.cols() + 1; }
  OperatorKind kind() const override { return OperatorKind::augment; }
  IntVector apply_int(std::span<const BigInt> v) const override;
  std::unique_ptr<ModOperator> reduce(const Modulus& mod) const override;
  BigInt entry_bound() const override;

 private:
  const LinearOperator& a_;
  std::span<const BigInt> b_;
};

// A^T A, evaluated one output entry at a time so no rows(A)-sized buffer is held.
class GramOperator final : public LinearOperator {
 public:
  explicit GramOperator(const SparseMatrix& a) : a_(a) {}
  std::size_t rows() const override { return a_.cols(); }
  std::size_t cols() const override { return a_.cols(); }
  OperatorKind kind() const override { return OperatorKind::gram; }
  IntVector apply_int(std::span<const BigInt> v) const override;
  std::unique_ptr<ModOperator> reduce(const Modulus& mod) const override;
  BigInt entry_bound() const override;

 private:
  const SparseMatrix& a_;
};

// scale * A A^T + c I, evaluated in two passes through an intermediate vector.
class GramTOperator final : public LinearOperator {
 public:
  GramTOperator(const SparseMatrix& a, BigInt scale, BigInt c);
  std::size_t rows() const override { return a_.rows(); }
  std::size_t cols() const override { return a_.rows(); }
  OperatorKind kind() const override { return OperatorKind::gram_t; }
  IntVector apply_int(std::span<const BigInt> v) const override;
  std::unique_ptr<ModOperator> reduce(const Modulus& mod) const override;
  BigInt entry_bound() const override;

 private:
  const SparseMatrix& a_;
  BigInt scale_;
  BigInt c_;
};

AugmentedOperator augment(const LinearOperator& a, std::span<const BigInt> b);
GramOperator gram(const SparseMatrix& a);
GramTOperator gram_t(const SparseMatrix& a, const BigInt& c);
ShiftedOperator shift(const LinearOperator& a, const BigInt& c);

// diag(d) * inner over F_p, with the diagonal given as residues.
class DiagScaledMod final : public ModOperator {
 public:
  DiagScaledMod(const ModOperator& inner, std::span<const FpElem> d);
  std::size_t rows() const override { return inner_.rows(); }
  std::size_t cols() const override { return inner_.cols(); }
  void apply(std::span<const FpElem> in, std::span<FpElem> out) const override;

 private:
  const ModOperator& inner_;
  std::span<const FpElem> d_;
};

// [[A, -b], [0, 0]] over F_p with b given as residues.
class AugmentedMod final : public ModOperator {
 public:
  AugmentedMod(const ModOperator& inner, std::span<const FpElem> b);
  std::size_t rows() const override { return inner_.rows() + 1; }
  std::size_t cols() const override { return inner_.cols() + 1; }
  void apply(std::span<const FpElem> in, std::span<FpElem> out) const override;

 private:
  const ModOperator& inner_;
  std::span<const FpElem> b_;
};

// Dense copy of an operator built column by column; for tests and tiny inputs.
std::vector<IntVector> materialize(const LinearOperator& op);

// Bound on |det| of any square matrix with n columns of Euclidean norm at most
// sqrt(n) * bound, and of the same matrix with one column replaced by b.
BigInt hadamard_bound(std::size_t n, const BigInt& bound);
BigInt cramer_bound(std::size_t n, const BigInt& bound, std::span<const BigInt> b);

}  // namespace lospace
