#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "dejitter/fields.hpp"
#include "dejitter/image.hpp"

namespace dejitter {

enum class JitterKind { line, line_pixel, pixel };

const char* to_string(JitterKind kind);
JitterKind parse_jitter_kind(const std::string& name);

struct SynthesisSpec {
  double sigma2 = 1.5;        // displacement variance, pixels^2
  double noise_sigma2 = 0.0;  // intensity noise variance
  std::uint64_t seed = 0;
  JitterKind kind = JitterKind::line;

  void validate() const;
};

/// Standard normal draws from a 64-bit Mersenne Twister via the Box-Muller
/// transform. Both pieces are fully specified, so streams are reproducible
/// across platforms and standard libraries.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}
  double standard();
  double operator()(double variance) { return std::sqrt(variance) * standard(); }

 private:
  double uniform_open();
  std::mt19937_64 engine_;
};

/// Nearest integer, halves rounded away from zero.
int round_displacement(double x);

template <class Field>
struct Corruption {
  Image image;
  Field truth;
};

/// Rows shifted by d_j ~ N(0, sigma2): out(i, j) = sample(img, i + d_j, j).
/// The returned bound is the largest realised magnitude.
Corruption<LineDisplacement> synthesize_line(const Image& img, const SynthesisSpec& spec);
/// Per-pixel horizontal shifts: out(i, j) = sample(img, i + d_ij, j).
Corruption<ScalarField> synthesize_line_pixel(const Image& img, const SynthesisSpec& spec);
/// Per-pixel 2-D shifts drawn component-wise: out(i, j) = sample(img, i + dx, j + dy).
Corruption<VectorField> synthesize_pixel(const Image& img, const SynthesisSpec& spec);

/// Adds N(0, noise_sigma2) to every channel of every pixel and clamps to [0,1].
Image add_noise(const Image& img, double noise_sigma2, std::uint64_t seed);

/// Seed of the noise stream used inside the synthesize_* functions.
std::uint64_t noise_seed(std::uint64_t seed);

}  // namespace dejitter
