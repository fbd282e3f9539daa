#include "dejitter/oracle.hpp"

#include <limits>

namespace dejitter {

namespace {

double diff_pow(std::span<const double> a, std::span<const double> b, double p) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += std::pow(std::fabs(a[c] - b[c]), p);
  return s;
}

struct PixelSearch {
  const Image& img;
  double alpha;
  double p;
  double weight;
  int rho;
  int m;
  int n;
  std::vector<Offset> current;
  std::vector<Offset> best;
  double best_energy = std::numeric_limits<double>::infinity();

  std::span<const double> value(int i, int j) const {
    const Offset d = current[static_cast<std::size_t>(j) * m + i];
    return sample(img, i - d.dx, j - d.dy);
  }

  void descend(int k, double partial) {
    if (k == m * n) {
      if (partial < best_energy) {
        best_energy = partial;
        best = current;
      }
      return;
    }
    const int i = k % m;
    const int j = k / m;
    for (int dx = -rho; dx <= rho; ++dx) {
      for (int dy = -rho; dy <= rho; ++dy) {
        current[k] = {dx, dy};
        double e = partial + alpha * (dx * dx + dy * dy);
        const auto v = value(i, j);
        if (i > 0) e += weight * diff_pow(v, value(i - 1, j), p);
        if (j > 0) e += weight * diff_pow(v, value(i, j - 1), p);
        if (e < best_energy) descend(k + 1, e);
      }
    }
    current[k] = {};
  }
};

}  // namespace

double reference_pixel_energy(const Image& img, const VectorField& field,
                              const EnergyParams& params) {
  const int m = img.width();
  const int n = img.height();
  if (field.width() != m || field.height() != n) throw std::invalid_argument("field size mismatch");
  const double p = params.exponent(1);
  const double w = params.weight(1);
  auto value = [&](int i, int j) {
    const Offset d = field.at(i, j);
    return sample(img, i - d.dx, j - d.dy);
  };
  double regular = 0.0;
  double horizontal = 0.0;
  double vertical = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      const Offset d = field.at(i, j);
      regular += params.alpha * (d.dx * d.dx + d.dy * d.dy);
      if (i > 0) horizontal += w * diff_pow(value(i, j), value(i - 1, j), p);
      if (j > 0) vertical += w * diff_pow(value(i, j), value(i, j - 1), p);
    }
  }
  return regular + horizontal + vertical;
}

PixelOracleResult brute_force_pixel_energy(const Image& img, const EnergyParams& params) {
  params.validate();
  const int m = img.width();
  const int n = img.height();
  const double labels = std::pow(2.0 * params.rho + 1.0, 2.0);
  if (static_cast<double>(m) * n * std::log10(labels) > std::log10(kMaxPixelEnumeration)) {
    throw std::invalid_argument("pixel search space exceeds enumeration limit");
  }
  PixelSearch search{img,
                     params.alpha,
                     params.exponent(1),
                     params.weight(1),
                     params.rho,
                     m,
                     n,
                     std::vector<Offset>(static_cast<std::size_t>(m) * n),
                     {}};
  search.descend(0, 0.0);
  return {VectorField(m, n, std::move(search.best), params.rho), search.best_energy};
}

}  // namespace dejitter
