#include "dejitter/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dejitter {

namespace {

Image remap(const Image& img, auto&& source) {
  const int m = img.width();
  const int n = img.height();
  const int D = img.channels();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m) * n * D);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      const auto [si, sj] = source(i, j);
      const auto v = sample(img, si, sj);
      out.insert(out.end(), v.begin(), v.end());
    }
  }
  return {m, n, D, std::move(out)};
}

Image maybe_noisy(Image img, const SynthesisSpec& spec) {
  if (spec.noise_sigma2 == 0.0) return img;
  return add_noise(img, spec.noise_sigma2, noise_seed(spec.seed));
}

}  // namespace

const char* to_string(JitterKind kind) {
  switch (kind) {
    case JitterKind::line:
      return "line";
    case JitterKind::line_pixel:
      return "line-pixel";
    case JitterKind::pixel:
      return "pixel";
  }
  return "unknown";
}

JitterKind parse_jitter_kind(const std::string& name) {
  if (name == "line") return JitterKind::line;
  if (name == "line-pixel") return JitterKind::line_pixel;
  if (name == "pixel") return JitterKind::pixel;
  throw std::invalid_argument("unknown jitter kind '" + name + "'");
}

void SynthesisSpec::validate() const {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("displacement variance must be positive");
  if (!(noise_sigma2 >= 0.0)) throw std::invalid_argument("noise variance must be non-negative");
}

double NormalSource::uniform_open() {
  // 53 random bits mapped into (0, 1).
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double NormalSource::standard() {
  const double u1 = uniform_open();
  const double u2 = uniform_open();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int round_displacement(double x) { return static_cast<int>(std::round(x)); }

std::uint64_t noise_seed(std::uint64_t seed) { return seed ^ 0x9E3779B97F4A7C15ULL; }

Corruption<LineDisplacement> synthesize_line(const Image& img, const SynthesisSpec& spec) {
  spec.validate();
  NormalSource normal(spec.seed);
  std::vector<int> d(static_cast<std::size_t>(img.height()));
  for (auto& v : d) v = round_displacement(normal(spec.sigma2));
  auto out = remap(img, [&](int i, int j) { return std::pair{i + d[j], j}; });
  return {maybe_noisy(std::move(out), spec), LineDisplacement::with_realized_bound(std::move(d))};
}

Corruption<ScalarField> synthesize_line_pixel(const Image& img, const SynthesisSpec& spec) {
  spec.validate();
  const int m = img.width();
  NormalSource normal(spec.seed);
  std::vector<int> d(static_cast<std::size_t>(m) * img.height());
  for (auto& v : d) v = round_displacement(normal(spec.sigma2));
  auto out = remap(img, [&](int i, int j) {
    return std::pair{i + d[static_cast<std::size_t>(j) * m + i], j};
  });
  return {maybe_noisy(std::move(out), spec),
          ScalarField::with_realized_bound(m, img.height(), std::move(d))};
}

Corruption<VectorField> synthesize_pixel(const Image& img, const SynthesisSpec& spec) {
  spec.validate();
  const int m = img.width();
  NormalSource normal(spec.seed);
  std::vector<Offset> d(static_cast<std::size_t>(m) * img.height());
  for (auto& v : d) {
    v.dx = round_displacement(normal(spec.sigma2));
    v.dy = round_displacement(normal(spec.sigma2));
  }
  auto out = remap(img, [&](int i, int j) {
    const Offset o = d[static_cast<std::size_t>(j) * m + i];
    return std::pair{i + o.dx, j + o.dy};
  });
  return {maybe_noisy(std::move(out), spec),
          VectorField::with_realized_bound(m, img.height(), std::move(d))};
}

Image add_noise(const Image& img, double noise_sigma2, std::uint64_t seed) {
  if (!(noise_sigma2 >= 0.0)) throw std::invalid_argument("noise variance must be non-negative");
  if (noise_sigma2 == 0.0) return img;
  NormalSource normal(seed);
  std::vector<double> out(img.data().begin(), img.data().end());
  for (auto& v : out) v = std::clamp(v + normal(noise_sigma2), 0.0, 1.0);
  return {img.width(), img.height(), img.channels(), std::move(out)};
}

}  // namespace dejitter
