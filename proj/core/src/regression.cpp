#include "lospace/error.hpp"
#include "lospace/rational_solver.hpp"
#include "lospace/workspace.hpp"

namespace lospace {

SolveOutcome linear_regression(const SparseMatrix& a, std::span<const BigInt> b, double eps, Rng& rng,
                               const SolveOptions& opts) {
  if (b.size() != a.rows()) throw Error(Errc::dimension_mismatch, "right-hand side length");
  if (a.rows() < a.cols()) throw Error(Errc::invalid_argument, "regression needs at least as many rows as columns");
  GramOperator normal(a);
  IntVector rhs(a.cols(), BigInt(0));
  for (const Entry& e : a.entries()) rhs[e.col] += from_i64(e.value) * b[e.row];
  std::int64_t bits = 0;
  for (const auto& x : rhs) bits += static_cast<std::int64_t>(storage_bits(x));
  Charge charge("regression-rhs", bits);
  return lin_solve(normal, rhs, eps, rng, opts);
}

}  // namespace lospace
