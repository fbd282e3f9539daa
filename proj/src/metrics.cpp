#include "dejitter/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dejitter {

namespace {

double scalar_accuracy(std::span<const int> est, std::span<const int> truth, int rho,
                       bool modulo_shift) {
  if (est.size() != truth.size()) throw std::invalid_argument("displacement sizes differ");
  const int reach = modulo_shift ? 2 * rho : 0;
  std::size_t best = 0;
  for (int c = -reach; c <= reach; ++c) {
    std::size_t hits = 0;
    for (std::size_t k = 0; k < est.size(); ++k) hits += (est[k] + c == truth[k]);
    best = std::max(best, hits);
  }
  return static_cast<double>(best) / static_cast<double>(est.size());
}

}  // namespace

double mse(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height() || a.channels() != b.channels()) {
    throw std::invalid_argument("images differ in size or channel count");
  }
  const auto x = a.data();
  const auto y = b.data();
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) sum += (x[k] - y[k]) * (x[k] - y[k]);
  return sum / static_cast<double>(x.size());
}

double psnr(const Image& a, const Image& b) {
  const double e = mse(a, b);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / e);
}

double displacement_accuracy(const LineDisplacement& est, const LineDisplacement& truth,
                             bool modulo_shift) {
  return scalar_accuracy(est.values(), truth.values(), std::max(est.rho(), truth.rho()),
                         modulo_shift);
}

double displacement_accuracy(const ScalarField& est, const ScalarField& truth, bool modulo_shift) {
  if (est.width() != truth.width() || est.height() != truth.height()) {
    throw std::invalid_argument("displacement field dimensions differ");
  }
  return scalar_accuracy(est.values(), truth.values(), std::max(est.rho(), truth.rho()),
                         modulo_shift);
}

double displacement_accuracy(const VectorField& est, const VectorField& truth, bool modulo_shift) {
  if (est.width() != truth.width() || est.height() != truth.height()) {
    throw std::invalid_argument("displacement field dimensions differ");
  }
  const auto e = est.values();
  const auto t = truth.values();
  const int reach = modulo_shift ? 2 * std::max(est.rho(), truth.rho()) : 0;
  std::size_t best = 0;
  for (int cx = -reach; cx <= reach; ++cx) {
    for (int cy = -reach; cy <= reach; ++cy) {
      std::size_t hits = 0;
      for (std::size_t k = 0; k < e.size(); ++k) {
        hits += (e[k].dx + cx == t[k].dx && e[k].dy + cy == t[k].dy);
      }
      best = std::max(best, hits);
    }
  }
  return static_cast<double>(best) / static_cast<double>(e.size());
}

}  // namespace dejitter
