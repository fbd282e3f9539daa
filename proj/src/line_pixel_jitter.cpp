#include "dejitter/line_pixel_jitter.hpp"

#include <memory>
#include <stdexcept>
#include <string>

#include "dejitter/parallel.hpp"

namespace dejitter {

namespace {

ChainProblem column_problem(std::shared_ptr<const Image> shared, int column,
                            const EnergyParams& params) {
  const Image& img = *shared;
  if (column < 0 || column >= img.width()) {
    throw std::out_of_range("column " + std::to_string(column) + " outside image");
  }
  const int rho = params.rho;
  const auto L = static_cast<std::size_t>(params.label_count());
  const auto n = static_cast<std::size_t>(img.height());
  auto value = [shared, column, rho](std::size_t j, std::size_t l) {
    return sample(*shared, column - (static_cast<int>(l) - rho), static_cast<int>(j));
  };

  ChainProblem::Unary unary = [alpha = params.alpha, rho](std::size_t, std::size_t l) {
    const double d = static_cast<int>(l) - rho;
    return alpha * d * d;
  };
  ChainProblem::Pairwise pairwise = [value, w = params.weight(1), p = params.exponent(1)](
                                        std::size_t j, std::size_t a, std::size_t b) {
    return w * pnorm_pow_diff(value(j, b), value(j - 1, a), p);
  };
  ChainProblem::Ternary ternary;
  if (params.order == 2) {
    ternary = [value, w = params.weight(2), p = params.exponent(2)](std::size_t j, std::size_t a,
                                                                    std::size_t b, std::size_t c) {
      return w * pnorm_pow_diff2(value(j, c), value(j - 1, b), value(j - 2, a), p);
    };
  }
  return {n, L, std::move(unary), std::move(pairwise), std::move(ternary)};
}

}  // namespace

ChainProblem build_column_problem(const Image& img, int column, const EnergyParams& params) {
  params.validate();
  return column_problem(std::make_shared<const Image>(img), column, params);
}

LinePixelResult dejitter_line_pixel(const Image& img, const EnergyParams& params, unsigned threads) {
  params.validate();
  const int m = img.width();
  const int n = img.height();
  std::vector<int> field(static_cast<std::size_t>(m) * n);
  std::vector<double> column_energy(static_cast<std::size_t>(m));
  const auto shared = std::make_shared<const Image>(img);

  parallel_for(static_cast<std::size_t>(m), threads, [&](std::size_t i) {
    const auto problem = column_problem(shared, static_cast<int>(i), params);
    const auto solution = solve(problem);
    for (int j = 0; j < n; ++j) {
      field[static_cast<std::size_t>(j) * m + i] = static_cast<int>(solution.labels[j]) - params.rho;
    }
    column_energy[i] = solution.energy;
  });

  double energy = 0.0;
  for (double e : column_energy) energy += e;
  ScalarField displacement(m, n, std::move(field), params.rho);
  auto reconstruction = reconstruct_line_pixel(img, displacement);
  return {std::move(displacement), std::move(reconstruction), energy};
}

Image reconstruct_line_pixel(const Image& img, const ScalarField& d) {
  if (d.width() != img.width() || d.height() != img.height()) {
    throw std::invalid_argument("displacement field size differs from image");
  }
  std::vector<double> out;
  out.reserve(img.data().size());
  for (int j = 0; j < img.height(); ++j) {
    for (int i = 0; i < img.width(); ++i) {
      const auto v = sample(img, i - d.at(i, j), j);
      out.insert(out.end(), v.begin(), v.end());
    }
  }
  return {img.width(), img.height(), img.channels(), std::move(out)};
}

double line_pixel_energy(const Image& img, const ScalarField& d, const EnergyParams& params) {
  params.validate();
  if (d.width() != img.width() || d.height() != img.height()) {
    throw std::invalid_argument("displacement field size differs from image");
  }
  auto value = [&](int i, int j) { return sample(img, i - d.at(i, j), j); };
  double energy = 0.0;
  for (int i = 0; i < img.width(); ++i) {
    for (int j = 0; j < img.height(); ++j) {
      energy += params.alpha * d.at(i, j) * d.at(i, j);
      if (j >= 1) {
        energy += params.weight(1) * pnorm_pow_diff(value(i, j), value(i, j - 1), params.exponent(1));
      }
      if (params.order == 2 && j >= 2) {
        energy += params.weight(2) *
                  pnorm_pow_diff2(value(i, j), value(i, j - 1), value(i, j - 2), params.exponent(2));
      }
    }
  }
  return energy;
}

}  // namespace dejitter
