#include "dejitter/fields.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace dejitter {

namespace {

void check_rho(int rho) {
  if (rho < 0) throw std::invalid_argument("displacement bound must be non-negative");
}

void check_bounded(int value, int rho) {
  if (std::abs(value) > rho) {
    throw std::invalid_argument("displacement " + std::to_string(value) + " exceeds bound " +
                                std::to_string(rho));
  }
}

void check_grid(int width, int height, std::size_t size) {
  if (width < 1 || height < 1 || size != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("displacement field size does not match " + std::to_string(width) +
                                "x" + std::to_string(height));
  }
}

int max_magnitude(std::span<const int> values) {
  int rho = 0;
  for (int v : values) rho = std::max(rho, std::abs(v));
  return rho;
}

int max_magnitude(std::span<const Offset> values) {
  int rho = 0;
  for (auto v : values) rho = std::max({rho, std::abs(v.dx), std::abs(v.dy)});
  return rho;
}

}  // namespace

LineDisplacement::LineDisplacement(std::vector<int> values, int rho)
    : values_(std::move(values)), rho_(rho) {
  check_rho(rho);
  if (values_.empty()) throw std::invalid_argument("line displacement must have at least one row");
  for (int v : values_) check_bounded(v, rho);
}

LineDisplacement LineDisplacement::with_realized_bound(std::vector<int> values) {
  const int rho = max_magnitude(values);
  return {std::move(values), rho};
}

ScalarField::ScalarField(int width, int height, std::vector<int> values, int rho)
    : width_(width), height_(height), values_(std::move(values)), rho_(rho) {
  check_rho(rho);
  check_grid(width, height, values_.size());
  for (int v : values_) check_bounded(v, rho);
}

ScalarField ScalarField::with_realized_bound(int width, int height, std::vector<int> values) {
  const int rho = max_magnitude(values);
  return {width, height, std::move(values), rho};
}

ScalarField ScalarField::zeros(int width, int height, int rho) {
  return {width, height, std::vector<int>(static_cast<std::size_t>(width) * height, 0), rho};
}

VectorField::VectorField(int width, int height, std::vector<Offset> values, int rho)
    : width_(width), height_(height), values_(std::move(values)), rho_(rho) {
  check_rho(rho);
  check_grid(width, height, values_.size());
  for (auto v : values_) {
    check_bounded(v.dx, rho);
    check_bounded(v.dy, rho);
  }
}

VectorField VectorField::with_realized_bound(int width, int height, std::vector<Offset> values) {
  const int rho = max_magnitude(values);
  return {width, height, std::move(values), rho};
}

VectorField VectorField::zeros(int width, int height, int rho) {
  return {width, height, std::vector<Offset>(static_cast<std::size_t>(width) * height), rho};
}

void EnergyParams::validate() const {
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be non-negative");
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  if (order != 1 && order != 2) throw std::invalid_argument("derivative order must be 1 or 2");
  if (rho < 0) throw std::invalid_argument("rho must be non-negative");
  for (int k = 0; k < 2; ++k) {
    if (!(term_weight[k] >= 0.0)) throw std::invalid_argument("term weights must be non-negative");
    if (term_p[k] && !(*term_p[k] > 0.0)) throw std::invalid_argument("term exponents must be positive");
  }
}

}  // namespace dejitter
