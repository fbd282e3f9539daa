#pragma once

// Exhaustive reference minimisers. These are deliberately naive and are used
// to check the dynamic-programming and block-coordinate solvers on small
// instances.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "dejitter/chain_dp.hpp"
#include "dejitter/fields.hpp"
#include "dejitter/image.hpp"

namespace dejitter {

inline constexpr double kMaxChainEnumeration = 1e7;
inline constexpr double kMaxPixelEnumeration = 1e9;

/// Enumerates every labeling in lexicographic order and returns the first one
/// attaining the minimum energy. Ternary terms are included when the cost
/// provider has them.
template <PairwiseCosts C>
ChainSolution brute_force_chain(const C& costs) {
  detail::check_dimensions(costs);
  const std::size_t n = costs.size();
  const std::size_t L = costs.label_count();
  if (static_cast<double>(n) * std::log10(static_cast<double>(L)) > std::log10(kMaxChainEnumeration)) {
    throw std::invalid_argument("chain search space exceeds enumeration limit");
  }

  std::vector<std::size_t> labels(n, 0);
  ChainSolution best{labels, evaluate(costs, labels)};
  while (true) {
    std::size_t k = n;
    while (k > 0 && labels[k - 1] + 1 == L) labels[--k] = 0;
    if (k == 0) break;
    ++labels[k - 1];
    const double e = evaluate(costs, labels);
    if (e < best.energy) best = {labels, e};
  }
  return best;
}

struct PixelOracleResult {
  VectorField field;
  double energy;
};

/// Global minimiser of the pixel-jitter energy by depth-first enumeration of
/// all fields in row-major, (dx, dy)-lexicographic order. Every term is
/// non-negative, so branches whose partial energy already reaches the best
/// complete energy are cut; the first minimiser in enumeration order is kept.
/// The energy is evaluated here independently of the pixel-jitter solver.
PixelOracleResult brute_force_pixel_energy(const Image& img, const EnergyParams& params);

/// Straightforward evaluation of the pixel-jitter energy used by the oracle.
double reference_pixel_energy(const Image& img, const VectorField& field, const EnergyParams& params);

}  // namespace dejitter
