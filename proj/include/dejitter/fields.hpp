#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace dejitter {

/// One horizontal shift per image row.
class LineDisplacement {
 public:
  LineDisplacement(std::vector<int> values, int rho);
  /// Bound taken from the largest magnitude present.
  static LineDisplacement with_realized_bound(std::vector<int> values);

  int rho() const { return rho_; }
  int size() const { return static_cast<int>(values_.size()); }
  int operator[](int j) const { return values_[j]; }
  std::span<const int> values() const { return values_; }

  bool operator==(const LineDisplacement&) const = default;

 private:
  std::vector<int> values_;
  int rho_;
};

/// One horizontal shift per pixel, stored row-major.
class ScalarField {
 public:
  ScalarField(int width, int height, std::vector<int> values, int rho);
  static ScalarField with_realized_bound(int width, int height, std::vector<int> values);
  static ScalarField zeros(int width, int height, int rho);

  int width() const { return width_; }
  int height() const { return height_; }
  int rho() const { return rho_; }
  int at(int i, int j) const { return values_[static_cast<std::size_t>(j) * width_ + i]; }
  std::span<const int> values() const { return values_; }

  bool operator==(const ScalarField&) const = default;

 private:
  int width_;
  int height_;
  std::vector<int> values_;
  int rho_;
};

/// Integer displacement (d1 horizontal, d2 vertical).
struct Offset {
  int dx = 0;
  int dy = 0;
  bool operator==(const Offset&) const = default;
};

/// One 2-D shift per pixel, stored row-major.
class VectorField {
 public:
  VectorField(int width, int height, std::vector<Offset> values, int rho);
  static VectorField with_realized_bound(int width, int height, std::vector<Offset> values);
  static VectorField zeros(int width, int height, int rho);

  int width() const { return width_; }
  int height() const { return height_; }
  int rho() const { return rho_; }
  Offset at(int i, int j) const { return values_[static_cast<std::size_t>(j) * width_ + i]; }
  std::span<const Offset> values() const { return values_; }

  bool operator==(const VectorField&) const = default;

 private:
  int width_;
  int height_;
  std::vector<Offset> values_;
  int rho_;
};

/// Parameters of the dejittering energies.
///
/// `order` is the highest vertical derivative order (1 or 2). The per-order
/// weights and exponents default to 1 and `p`; pixel jitter uses only the
/// first-order entries.
struct EnergyParams {
  double alpha = 0.0;
  double p = 1.0;
  int order = 1;
  int rho = 0;
  std::array<double, 2> term_weight{1.0, 1.0};
  std::array<std::optional<double>, 2> term_p{};

  void validate() const;
  int label_count() const { return 2 * rho + 1; }
  double weight(int derivative_order) const { return term_weight[derivative_order - 1]; }
  double exponent(int derivative_order) const { return term_p[derivative_order - 1].value_or(p); }
};

}  // namespace dejitter
