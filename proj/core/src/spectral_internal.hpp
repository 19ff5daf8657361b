#pragma once

#include <optional>
#include <vector>

#include "lospace/spectral.hpp"

namespace lospace::detail {

// Eigenvalues of b, whose consecutive eigenvalues are assumed separated by more than
// `gamma`, located to within 1.25 * leaf_width. Returns nothing when the merged count
// is not dim(b).
std::optional<std::vector<FixedL>> separated_spectrum(const DyadicOperator& b, double gamma, double leaf_width,
                                                      Rng& rng, SpectrumStats* stats, const SpectrumOptions& opts);

double log2_of(const BigInt& x);

}  // namespace lospace::detail
