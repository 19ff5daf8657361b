#include <algorithm>
#include <cmath>
#include <thread>

#include "lospace/error.hpp"
#include "lospace/spectral.hpp"
#include "lospace/workspace.hpp"
#include "spectral_internal.hpp"

namespace lospace {

namespace detail {

double log2_of(const BigInt& x) {
  if (sgn(x) == 0) return -INFINITY;
  long exp = 0;
  double m = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log2(std::fabs(m)) + static_cast<double>(exp);
}

namespace {

struct Interval {
  FixedL lo;
  FixedL hi;
};

void run_tests(const DyadicOperator& b, const std::vector<Interval>& level, const Rng& level_rng,
               std::vector<Decision>& out, unsigned threads) {
  out.assign(level.size(), Decision::no);
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t k = begin; k < level.size(); k += step) {
      Rng r = level_rng.derive("interval", k);
      out[k] = shift_invert(b, level[k].lo, level[k].hi, r);
    }
  };
  std::size_t workers = std::min<std::size_t>(std::max(threads, 1U), level.size());
  if (workers <= 1) {
    work(0, 1);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work, t, workers);
  for (auto& th : pool) th.join();
}

}  // namespace

std::optional<std::vector<FixedL>> separated_spectrum(const DyadicOperator& b, double gamma, double leaf_width,
                                                      Rng& rng, SpectrumStats* stats, const SpectrumOptions& opts) {
  std::size_t n = b.dim();
  // Every eigenvalue lies within n times the entry bound.
  BigInt reach = BigInt(static_cast<unsigned long>(n)) * b.entry_bound() + 1;
  std::size_t radius_bits = bit_length(reach);
  FixedL radius(shift_left(BigInt(1), radius_bits), 0);
  std::vector<Interval> level{{radius.negated(), radius}};
  std::vector<FixedL> leaves;
  std::vector<Decision> decisions;
  std::size_t cap = std::max<std::size_t>(8 * n, 8);
  Charge charge("spectrum-frontier", 0);

  for (std::size_t depth = 0; !level.empty(); ++depth) {
    if (level.size() > cap) return std::nullopt;
    Rng level_rng = rng.derive("level", depth);
    run_tests(b, level, level_rng, decisions, opts.threads);
    std::vector<Interval> next;
    std::size_t internal = 0;
    std::int64_t bits = 0;
    for (std::size_t k = 0; k < level.size(); ++k) {
      if (decisions[k] == Decision::no) continue;
      const Interval& node = level[k];
      if ((node.hi - node.lo).to_double() < leaf_width) {
        leaves.push_back(node.lo);
        continue;
      }
      ++internal;
      FixedL mid = (node.lo + node.hi).half();
      next.push_back({node.lo, mid});
      next.push_back({mid, node.hi});
      bits += 3 * static_cast<std::int64_t>(storage_bits(mid.scaled()));
    }
    charge.resize(bits);
    if (stats) {
      stats->nodes_per_level.push_back(level.size());
      stats->internal_per_level.push_back(internal);
      stats->interval_tests += level.size();
    }
    level = std::move(next);
  }

  std::sort(leaves.begin(), leaves.end());
  std::vector<FixedL> merged;
  FixedL half_gap = FixedL::from_double(gamma / 2.0, 80);
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    if (k == 0 || leaves[k - 1] <= leaves[k] - half_gap) merged.push_back(leaves[k]);
  }
  if (merged.size() != n) return std::nullopt;
  return merged;
}

}  // namespace detail

std::vector<FixedL> spectrum(const DyadicOperator& a, double eps, Rng& rng, SpectrumStats* stats,
                             const SpectrumOptions& opts) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::invalid_argument, "epsilon must lie in (0, 1)");
  double n = static_cast<double>(a.dim());
  double bound = std::max(1.0, std::exp2(detail::log2_of(a.entry_bound())));
  double gamma = eps * eps / (n * n * n * n * bound);
  if (stats) {
    *stats = SpectrumStats{};
    stats->gamma = gamma;
  }
  for (std::size_t attempt = 0; attempt < 2; ++attempt) {
    Rng r = rng.derive("spectrum-attempt", attempt);
    Rng perturb_rng = r.derive("perturb");
    DyadicOperator b = perturb_spectrum(a, eps / 2.0, gamma, perturb_rng);
    if (stats) {
      stats->attempts = attempt + 1;
      stats->internal_per_level.clear();
      stats->nodes_per_level.clear();
    }
    Rng search = r.derive("search");
    auto values = detail::separated_spectrum(b, gamma, gamma / 8.0, search, stats, opts);
    if (values) return *values;
  }
  throw Error(Errc::result_count_mismatch, "spectrum leaf count differs from the dimension");
}

std::vector<FixedL> spectrum(const SparseMatrix& a, double eps, Rng& rng, SpectrumStats* stats,
                             const SpectrumOptions& opts) {
  if (!a.is_symmetric()) throw Error(Errc::invalid_argument, "matrix must be symmetric");
  SparseOperator op(a);
  return spectrum(DyadicOperator(op), eps, rng, stats, opts);
}

}  // namespace lospace
