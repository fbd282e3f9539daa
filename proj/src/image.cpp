#include "dejitter/image.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace dejitter {

namespace {

void check_shape(int width, int height, int channels) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("image dimensions must be positive, got " + std::to_string(width) +
                                "x" + std::to_string(height));
  }
  if (channels != 1 && channels != 3) {
    throw std::invalid_argument("image must have 1 or 3 channels, got " + std::to_string(channels));
  }
}

constexpr std::array<double, 3> kZeroPixel{};

}  // namespace

Image::Image(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  check_shape(width, height, channels);
  if (!(fill >= 0.0 && fill <= 1.0)) throw std::invalid_argument("image fill value outside [0,1]");
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

Image::Image(int width, int height, int channels, std::vector<double> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  check_shape(width, height, channels);
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw std::invalid_argument("image data length " + std::to_string(data_.size()) +
                                " does not match " + std::to_string(width) + "x" +
                                std::to_string(height) + "x" + std::to_string(channels));
  }
  for (double v : data_) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("image intensity outside [0,1]");
  }
}

std::span<const double> sample(const Image& img, int i, int j) {
  if (img.contains(i, j)) return img.pixel(i, j);
  return std::span<const double>(kZeroPixel).first(static_cast<std::size_t>(img.channels()));
}

double pnorm_pow(std::span<const double> v, double p) {
  double sum = 0.0;
  for (double x : v) sum += abs_pow(x, p);
  return sum;
}

}  // namespace dejitter
