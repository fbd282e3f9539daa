#include "dejitter/line_jitter.hpp"

#include <memory>
#include <stdexcept>

#include "dejitter/parallel.hpp"

namespace dejitter {

namespace {

struct LineCostModel {
  Image img;
  EnergyParams params;
  std::size_t labels;
  std::vector<double> pairwise_table;  // [j][prev][cur]
  std::vector<double> ternary_table;   // [j][prev2][prev][cur]

  int shift(std::size_t label) const { return static_cast<int>(label) - params.rho; }

  double first_order(std::size_t j, std::size_t prev, std::size_t cur) const {
    const int row = static_cast<int>(j);
    const int d = shift(cur);
    const int dp = shift(prev);
    const double p = params.exponent(1);
    double sum = 0.0;
    for (int i = 0; i < img.width(); ++i) {
      sum += pnorm_pow_diff(sample(img, i - d, row), sample(img, i - dp, row - 1), p);
    }
    return params.weight(1) * sum;
  }

  double second_order(std::size_t j, std::size_t prev2, std::size_t prev, std::size_t cur) const {
    const int row = static_cast<int>(j);
    const int d = shift(cur);
    const int dp = shift(prev);
    const int dpp = shift(prev2);
    const double p = params.exponent(2);
    double sum = 0.0;
    for (int i = 0; i < img.width(); ++i) {
      sum += pnorm_pow_diff2(sample(img, i - d, row), sample(img, i - dp, row - 1),
                             sample(img, i - dpp, row - 2), p);
    }
    return params.weight(2) * sum;
  }

  void tabulate(unsigned threads) {
    const std::size_t n = static_cast<std::size_t>(img.height());
    const std::size_t L = labels;
    pairwise_table.assign(n * L * L, 0.0);
    parallel_for(n - 1, threads, [&](std::size_t k) {
      const std::size_t j = k + 1;
      for (std::size_t a = 0; a < L; ++a) {
        for (std::size_t b = 0; b < L; ++b) pairwise_table[(j * L + a) * L + b] = first_order(j, a, b);
      }
    });
    if (params.order < 2 || n < 3) return;
    ternary_table.assign(n * L * L * L, 0.0);
    parallel_for(n - 2, threads, [&](std::size_t k) {
      const std::size_t j = k + 2;
      for (std::size_t a = 0; a < L; ++a) {
        for (std::size_t b = 0; b < L; ++b) {
          for (std::size_t c = 0; c < L; ++c) {
            ternary_table[((j * L + a) * L + b) * L + c] = second_order(j, a, b, c);
          }
        }
      }
    });
  }
};

}  // namespace

ChainProblem build_line_problem(const Image& img, const EnergyParams& params,
                                const LineSolverOptions& options) {
  params.validate();
  const auto L = static_cast<std::size_t>(params.label_count());
  const auto n = static_cast<std::size_t>(img.height());
  auto model = std::make_shared<LineCostModel>(LineCostModel{img, params, L, {}, {}});

  const std::size_t entries = n * L * L + (params.order == 2 ? n * L * L * L : 0);
  const bool tabulated = entries * sizeof(double) <= options.table_budget_bytes;
  if (tabulated) model->tabulate(options.threads);

  ChainProblem::Unary unary = [model](std::size_t, std::size_t l) {
    const double d = model->shift(l);
    return model->params.alpha * d * d;
  };

  ChainProblem::Pairwise pairwise;
  if (tabulated) {
    pairwise = [model, L](std::size_t j, std::size_t a, std::size_t b) {
      return model->pairwise_table[(j * L + a) * L + b];
    };
  } else {
    pairwise = [model](std::size_t j, std::size_t a, std::size_t b) {
      return model->first_order(j, a, b);
    };
  }

  ChainProblem::Ternary ternary;
  if (params.order == 2) {
    if (tabulated && n >= 3) {
      ternary = [model, L](std::size_t j, std::size_t a, std::size_t b, std::size_t c) {
        return model->ternary_table[((j * L + a) * L + b) * L + c];
      };
    } else {
      ternary = [model](std::size_t j, std::size_t a, std::size_t b, std::size_t c) {
        return model->second_order(j, a, b, c);
      };
    }
  }
  return {n, L, std::move(unary), std::move(pairwise), std::move(ternary)};
}

LineResult dejitter_line(const Image& img, const EnergyParams& params,
                         const LineSolverOptions& options) {
  const auto problem = build_line_problem(img, params, options);
  const auto solution = solve(problem);
  std::vector<int> d(solution.labels.size());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = static_cast<int>(solution.labels[j]) - params.rho;
  LineDisplacement displacement(std::move(d), params.rho);
  auto reconstruction = reconstruct_line(img, displacement);
  return {std::move(displacement), std::move(reconstruction), solution.energy};
}

Image reconstruct_line(const Image& img, const LineDisplacement& d) {
  if (d.size() != img.height()) throw std::invalid_argument("displacement length differs from image height");
  std::vector<double> out;
  out.reserve(img.data().size());
  for (int j = 0; j < img.height(); ++j) {
    for (int i = 0; i < img.width(); ++i) {
      const auto v = sample(img, i - d[j], j);
      out.insert(out.end(), v.begin(), v.end());
    }
  }
  return {img.width(), img.height(), img.channels(), std::move(out)};
}

double line_energy(const Image& img, const LineDisplacement& d, const EnergyParams& params) {
  params.validate();
  if (d.size() != img.height()) throw std::invalid_argument("displacement length differs from image height");
  const int n = img.height();
  double energy = 0.0;
  for (int j = 0; j < n; ++j) {
    energy += params.alpha * d[j] * d[j];
    if (j >= 1) {
      double sum = 0.0;
      for (int i = 0; i < img.width(); ++i) {
        sum += pnorm_pow_diff(sample(img, i - d[j], j), sample(img, i - d[j - 1], j - 1),
                              params.exponent(1));
      }
      energy += params.weight(1) * sum;
    }
    if (params.order == 2 && j >= 2) {
      double sum = 0.0;
      for (int i = 0; i < img.width(); ++i) {
        sum += pnorm_pow_diff2(sample(img, i - d[j], j), sample(img, i - d[j - 1], j - 1),
                               sample(img, i - d[j - 2], j - 2), params.exponent(2));
      }
      energy += params.weight(2) * sum;
    }
  }
  return energy;
}

}  // namespace dejitter
