#pragma once

// Line pixel jitter: an independent horizontal shift per pixel. The energy has
// no coupling between columns, so it splits into one chain per column, each
// solved exactly.

#include "dejitter/chain_dp.hpp"
#include "dejitter/fields.hpp"
#include "dejitter/image.hpp"

namespace dejitter {

/// Chain over the rows of column `column` (zero-based), labels l = d + rho.
ChainProblem build_column_problem(const Image& img, int column, const EnergyParams& params);

struct LinePixelResult {
  ScalarField displacement;
  Image reconstruction;
  double energy;  // sum of the per-column optima
};

/// Columns are solved on up to `threads` workers; the output does not depend
/// on the worker count.
LinePixelResult dejitter_line_pixel(const Image& img, const EnergyParams& params,
                                    unsigned threads = 1);

/// out(i, j) = sample(img, i - d_ij, j).
Image reconstruct_line_pixel(const Image& img, const ScalarField& d);

/// Direct evaluation of the line-pixel-jitter energy for a given field.
double line_pixel_energy(const Image& img, const ScalarField& d, const EnergyParams& params);

}  // namespace dejitter
