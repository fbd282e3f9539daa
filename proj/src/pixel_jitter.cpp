#include "dejitter/pixel_jitter.hpp"

#include <sstream>
#include <stdexcept>

#include "dejitter/chain_dp.hpp"
#include "dejitter/parallel.hpp"

namespace dejitter {

namespace {

void check_size(const Image& img, const VectorField& field) {
  if (field.width() != img.width() || field.height() != img.height()) {
    throw std::invalid_argument("displacement field size differs from image");
  }
}

std::span<const double> reconstructed(const Image& img, const VectorField& field, int i, int j) {
  const Offset d = field.at(i, j);
  return sample(img, i - d.dx, j - d.dy);
}

// Restriction of the pixel energy to one column or row. Candidate values
// under every label and the unary terms (regulariser plus differences to the
// two fixed neighbouring lines) are precomputed; the pairwise term along the
// line is evaluated from the candidates.
class LineSubproblem {
 public:
  LineSubproblem(const Image& img, const VectorField& field, const EnergyParams& params,
                 bool column, int index)
      : length_(static_cast<std::size_t>(column ? img.height() : img.width())),
        labels_(static_cast<std::size_t>(params.label_count() * params.label_count())),
        channels_(static_cast<std::size_t>(img.channels())),
        weight_(params.weight(1)),
        p_(params.exponent(1)) {
    const int rho = params.rho;
    const int across = column ? img.width() : img.height();
    candidates_.resize(length_ * labels_ * channels_);
    unary_.resize(length_ * labels_);

    for (std::size_t k = 0; k < length_; ++k) {
      const int i = column ? index : static_cast<int>(k);
      const int j = column ? static_cast<int>(k) : index;
      // Fixed neighbours on either side of the line.
      const bool has_before = index > 0;
      const bool has_after = index + 1 < across;
      std::span<const double> before;
      std::span<const double> after;
      if (has_before) before = column ? reconstructed(img, field, i - 1, j) : reconstructed(img, field, i, j - 1);
      if (has_after) after = column ? reconstructed(img, field, i + 1, j) : reconstructed(img, field, i, j + 1);

      for (std::size_t l = 0; l < labels_; ++l) {
        const Offset d = label_offset(static_cast<int>(l), rho);
        const auto v = sample(img, i - d.dx, j - d.dy);
        std::copy(v.begin(), v.end(), candidates_.begin() + static_cast<std::ptrdiff_t>((k * labels_ + l) * channels_));
        double u = params.alpha * (d.dx * d.dx + d.dy * d.dy);
        if (has_before) u += weight_ * pnorm_pow_diff(v, before, p_);
        if (has_after) u += weight_ * pnorm_pow_diff(after, v, p_);
        unary_[k * labels_ + l] = u;
      }
    }
  }

  std::size_t size() const { return length_; }
  std::size_t label_count() const { return labels_; }
  double unary(std::size_t k, std::size_t l) const { return unary_[k * labels_ + l]; }
  double pairwise(std::size_t k, std::size_t a, std::size_t b) const {
    return weight_ * pnorm_pow_diff(candidate(k, b), candidate(k - 1, a), p_);
  }

 private:
  std::span<const double> candidate(std::size_t k, std::size_t l) const {
    return {candidates_.data() + (k * labels_ + l) * channels_, channels_};
  }

  std::size_t length_;
  std::size_t labels_;
  std::size_t channels_;
  double weight_;
  double p_;
  std::vector<double> candidates_;
  std::vector<double> unary_;
};

}  // namespace

const char* to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::odd_columns:
      return "odd-columns";
    case SweepKind::even_columns:
      return "even-columns";
    case SweepKind::odd_rows:
      return "odd-rows";
    case SweepKind::even_rows:
      return "even-rows";
  }
  return "unknown";
}

SweepKind sweep_kind(int t) { return static_cast<SweepKind>(t % 4); }

std::string BcdTrace::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "sweep,kind,energy\n";
  out << 0 << ",initial," << initial_energy << '\n';
  for (const auto& r : sweeps) out << r.sweep << ',' << to_string(r.kind) << ',' << r.energy << '\n';
  return out.str();
}

double pixel_energy(const Image& img, const VectorField& field, const EnergyParams& params) {
  params.validate();
  check_size(img, field);
  const int m = img.width();
  const int n = img.height();
  const double p = params.exponent(1);
  const double w = params.weight(1);

  double regular = 0.0;
  double horizontal = 0.0;
  double vertical = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      const Offset d = field.at(i, j);
      regular += params.alpha * (d.dx * d.dx + d.dy * d.dy);
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 1; i < m; ++i) {
      horizontal += w * pnorm_pow_diff(reconstructed(img, field, i, j),
                                       reconstructed(img, field, i - 1, j), p);
    }
  }
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      vertical += w * pnorm_pow_diff(reconstructed(img, field, i, j),
                                     reconstructed(img, field, i, j - 1), p);
    }
  }
  return regular + horizontal + vertical;
}

VectorField bcd_sweep(const Image& img, const VectorField& field, const EnergyParams& params,
                      SweepKind kind, unsigned threads) {
  params.validate();
  check_size(img, field);
  if (field.rho() > params.rho) throw std::invalid_argument("field exceeds the label bound");
  const bool column = kind == SweepKind::odd_columns || kind == SweepKind::even_columns;
  const int first = (kind == SweepKind::odd_columns || kind == SweepKind::odd_rows) ? 0 : 1;
  const int lines = column ? img.width() : img.height();
  const int m = img.width();

  std::vector<Offset> out(field.values().begin(), field.values().end());
  const std::size_t selected = lines > first ? static_cast<std::size_t>((lines - first + 1) / 2) : 0;
  parallel_for(selected, threads, [&](std::size_t s) {
    const int index = first + 2 * static_cast<int>(s);
    const LineSubproblem sub(img, field, params, column, index);
    const auto solution = solve_chain(sub);
    for (std::size_t k = 0; k < solution.labels.size(); ++k) {
      const int i = column ? index : static_cast<int>(k);
      const int j = column ? static_cast<int>(k) : index;
      out[static_cast<std::size_t>(j) * m + i] = label_offset(static_cast<int>(solution.labels[k]), params.rho);
    }
  });
  return {img.width(), img.height(), std::move(out), params.rho};
}

PixelResult dejitter_pixel(const Image& img, const EnergyParams& params,
                           const PixelSolverOptions& options) {
  params.validate();
  if (options.max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");

  auto field = VectorField::zeros(img.width(), img.height(), params.rho);
  BcdTrace trace;
  trace.initial_energy = pixel_energy(img, field, params);
  int sweep = 0;
  for (int round = 0; round < options.max_rounds; ++round) {
    const VectorField start = field;
    for (int s = 0; s < 4; ++s) {
      const SweepKind kind = sweep_kind(s);
      field = bcd_sweep(img, field, params, kind, options.threads);
      trace.sweeps.push_back({++sweep, kind, pixel_energy(img, field, params)});
    }
    ++trace.rounds;
    if (field == start) {
      trace.converged = true;
      break;
    }
  }
  auto reconstruction = reconstruct_pixel(img, field);
  return {std::move(field), std::move(reconstruction), std::move(trace)};
}

Image reconstruct_pixel(const Image& img, const VectorField& d) {
  check_size(img, d);
  std::vector<double> out;
  out.reserve(img.data().size());
  for (int j = 0; j < img.height(); ++j) {
    for (int i = 0; i < img.width(); ++i) {
      const auto v = reconstructed(img, d, i, j);
      out.insert(out.end(), v.begin(), v.end());
    }
  }
  return {img.width(), img.height(), img.channels(), std::move(out)};
}

}  // namespace dejitter
