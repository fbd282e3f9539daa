#pragma once

#include "dejitter/fields.hpp"
#include "dejitter/image.hpp"

namespace dejitter {

/// Mean squared difference over all m*n*D entries.
double mse(const Image& a, const Image& b);

/// 10*log10(1/mse) for [0,1] intensities; +inf for identical images.
double psnr(const Image& a, const Image& b);

/// Fraction of entries where the estimate equals the truth. With
/// `modulo_shift`, the best fraction over constant offsets c, |c| <= 2*rho,
/// added to the estimate (rho being the larger of the two bounds).
double displacement_accuracy(const LineDisplacement& est, const LineDisplacement& truth,
                             bool modulo_shift);
double displacement_accuracy(const ScalarField& est, const ScalarField& truth, bool modulo_shift);
/// Vector fields count a pixel as correct only when both components match;
/// the offset search runs over constant pairs.
double displacement_accuracy(const VectorField& est, const VectorField& truth, bool modulo_shift);

}  // namespace dejitter
