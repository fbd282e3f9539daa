#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace dejitter {

/// Multi-channel raster with intensities in [0,1].
///
/// Pixels are addressed by (column i, row j), both zero-based, with rows
/// stored top to bottom and channels interleaved. An Image is immutable once
/// constructed; algorithms assemble a data vector and construct a new one.
class Image {
 public:
  Image(int width, int height, int channels, double fill = 0.0);
  Image(int width, int height, int channels, std::vector<double> data);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }

  bool contains(int i, int j) const { return i >= 0 && i < width_ && j >= 0 && j < height_; }

  /// Unchecked access to pixel (i, j); use sample() for arbitrary coordinates.
  std::span<const double> pixel(int i, int j) const {
    const auto offset = (static_cast<std::size_t>(j) * width_ + i) * channels_;
    return {data_.data() + offset, static_cast<std::size_t>(channels_)};
  }

  std::span<const double> data() const { return data_; }

  bool operator==(const Image&) const = default;

 private:
  int width_;
  int height_;
  int channels_;
  std::vector<double> data_;
};

/// Pixel (i, j) of img, or the all-zero vector when (i, j) lies outside the
/// image. Total over all integer coordinates.
std::span<const double> sample(const Image& img, int i, int j);

/// |x|^p with the p = 1, 2 and 0.5 cases evaluated exactly.
inline double abs_pow(double x, double p) {
  const double a = std::fabs(x);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  if (p == 0.5) return std::sqrt(a);
  return std::pow(a, p);
}

/// Sum over components of |v_c|^p.
double pnorm_pow(std::span<const double> v, double p);

/// pnorm_pow(a - b, p) without materialising the difference.
inline double pnorm_pow_diff(std::span<const double> a, std::span<const double> b, double p) {
  double sum = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) sum += abs_pow(a[c] - b[c], p);
  return sum;
}

/// pnorm_pow(a - 2b + c, p), the second backward difference.
inline double pnorm_pow_diff2(std::span<const double> a, std::span<const double> b,
                              std::span<const double> c, double p) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += abs_pow(a[k] - 2.0 * b[k] + c[k], p);
  return sum;
}

}  // namespace dejitter
