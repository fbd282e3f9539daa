#pragma once

// Line jitter: one horizontal shift d_j per row, recovered by minimising
//
//   alpha * sum_j d_j^2
//     + sum_{j>=1} sum_i |u(i - d_j, j) - u(i - d_{j-1}, j-1)|_p^p
//     + sum_{j>=2} sum_i |u(i - d_j, j) - 2 u(i - d_{j-1}, j-1) + u(i - d_{j-2}, j-2)|_p^p
//
// (second line only for order 2) with a single chain DP over rows. The data
// sums run over every column, reading zeros outside the image.

#include <cstddef>

#include "dejitter/chain_dp.hpp"
#include "dejitter/fields.hpp"
#include "dejitter/image.hpp"

namespace dejitter {

struct LineSolverOptions {
  /// Pairwise (and ternary) costs are tabulated when the tables fit in this
  /// many bytes, otherwise evaluated on demand.
  std::size_t table_budget_bytes = std::size_t{256} << 20;
  unsigned threads = 1;
};

/// Chain over rows with labels l = d + rho, d in [-rho, rho].
ChainProblem build_line_problem(const Image& img, const EnergyParams& params,
                                const LineSolverOptions& options = {});

struct LineResult {
  LineDisplacement displacement;
  Image reconstruction;
  double energy;
};

LineResult dejitter_line(const Image& img, const EnergyParams& params,
                         const LineSolverOptions& options = {});

/// out(i, j) = sample(img, i - d_j, j).
Image reconstruct_line(const Image& img, const LineDisplacement& d);

/// Direct evaluation of the line-jitter energy for a given displacement.
double line_energy(const Image& img, const LineDisplacement& d, const EnergyParams& params);

}  // namespace dejitter
