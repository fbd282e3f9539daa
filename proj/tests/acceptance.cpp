// Acceptance run: one [PASS]/[FAIL] line per criterion, followed by indented
// measurements. Exit status is non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dejitter/chain_dp.hpp"
#include "dejitter/cli.hpp"
#include "dejitter/io.hpp"
#include "dejitter/line_jitter.hpp"
#include "dejitter/line_pixel_jitter.hpp"
#include "dejitter/metrics.hpp"
#include "dejitter/oracle.hpp"
#include "dejitter/pixel_jitter.hpp"
#include "dejitter/synthesis.hpp"
#include "support/scenes.hpp"
#include "support/temp_dir.hpp"

using namespace dejitter;
using namespace dejitter::testing;

namespace {

constexpr double kRelTol = 1e-9;
constexpr double kMonotoneTol = 1e-9;
constexpr double kSigma2 = 1.5;
constexpr double kNoiseSigma2 = 0.01;

// Black columns added on both sides of line-jitter scenes. Wider than any
// displacement realised at sigma^2 = 1.5 on 64 rows.
constexpr int kFrame = 8;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double time_once(const std::function<void()>& body) {
  const auto start = Clock::now();
  body();
  return seconds_since(start);
}

struct Scaling {
  double small;  // median seconds
  double large;
  double ratio;  // median of per-round ratios
};

// Alternates the two workloads so that background load affects both alike.
Scaling measure_scaling(const std::function<void()>& small, const std::function<void()>& large, int rounds) {
  small();
  large();
  std::vector<double> a, b, r;
  for (int k = 0; k < rounds; ++k) {
    a.push_back(time_once(small));
    b.push_back(time_once(large));
    r.push_back(b.back() / a.back());
  }
  const auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  return {median(a), median(b), median(r)};
}

struct Report {
  int failures = 0;

  void criterion(int id, const std::string& title, bool pass, const std::vector<std::string>& details) {
    std::printf("[%s] %d. %s\n", pass ? "PASS" : "FAIL", id, title.c_str());
    for (const auto& d : details) std::printf("       %s\n", d.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
};

template <class... Args>
std::string format(const char* fmt, Args... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, fmt, args...);
  return buffer;
}

Image crop(const Image& img, int x, int y, int m, int n) {
  std::vector<double> data;
  for (int j = y; j < y + n; ++j) {
    for (int i = x; i < x + m; ++i) {
      const auto v = img.pixel(i, j);
      data.insert(data.end(), v.begin(), v.end());
    }
  }
  return {m, n, img.channels(), std::move(data)};
}

// Instances shared by criteria 3, 6 and 8.
struct LineInstance {
  std::string label;
  Image original;
  Corruption<LineDisplacement> corrupted;
  LineResult result;
};

struct PixelInstance {
  Image original;
  Corruption<VectorField> corrupted;
  PixelResult result;
};

std::vector<LineInstance> line_instances;
std::vector<PixelInstance> pixel_instances;

void chain_oracle(Report& report) {
  const auto start = Clock::now();
  int matched = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Uniform pick(seed);
    const std::size_t n = 1 + pick.below(6);
    const std::size_t L = 1 + pick.below(5);
    const auto problem = random_chain(n, L, seed, false);
    const double dp = solve_chain(problem).energy;
    const double brute = brute_force_chain(problem).energy;
    worst = std::max(worst, std::fabs(dp - brute) / std::max(std::fabs(brute), 1e-300));
    if (close_rel(dp, brute, kRelTol)) ++matched;
  }
  const double elapsed = seconds_since(start);
  report.criterion(1, "chain DP matches enumeration on 200 random chains (n<=6, L<=5) in < 5 s",
                   matched == 200 && elapsed < 5.0,
                   {format("matched %d/200, worst relative gap %.2e, %.3f s", matched, worst, elapsed)});
}

void ternary_oracle(Report& report) {
  const auto start = Clock::now();
  int matched = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Uniform pick(1000 + seed);
    const std::size_t n = 1 + pick.below(5);
    const std::size_t L = 1 + pick.below(4);
    const auto problem = random_chain(n, L, seed, true);
    const double dp = solve_chain_ternary(problem).energy;
    const double brute = brute_force_chain(problem).energy;
    worst = std::max(worst, std::fabs(dp - brute) / std::max(std::fabs(brute), 1e-300));
    if (close_rel(dp, brute, kRelTol)) ++matched;
  }
  const double elapsed = seconds_since(start);
  report.criterion(2, "ternary chain DP matches enumeration on 100 random chains (n<=5, L<=4) in < 10 s",
                   matched == 100 && elapsed < 10.0,
                   {format("matched %d/100, worst relative gap %.2e, %.3f s", matched, worst, elapsed)});
}

void line_optimality(Report& report) {
  int below_truth = 0;
  int total = 0;
  // Framed scenes: 20 instances alternating gray and RGB and orders 1 and 2.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int channels = seed % 2 ? 3 : 1;
    const auto original = pad_columns(scene_image(64 - 2 * kFrame, 64, channels, seed), kFrame);
    auto c = synthesize_line(original, {kSigma2, 0.0, seed, JitterKind::line});
    const EnergyParams params{0.01, 0.5, 1 + static_cast<int>((seed / 2) % 2), c.truth.rho()};
    auto r = dejitter_line(c.image, params);
    ++total;
    if (r.energy <= line_energy(c.image, c.truth, params) + 1e-9) ++below_truth;
    line_instances.push_back({format("scene %d", static_cast<int>(seed)), original, std::move(c), std::move(r)});
  }
  // Vertical stripes with black margins.
  int exact = 0;
  double min_accuracy = 1.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto original = vertical_stripes(64, 64, seed % 2 ? 3 : 1, 500 + seed, kFrame);
    auto c = synthesize_line(original, {kSigma2, 0.0, 100 + seed, JitterKind::line});
    const EnergyParams params{0.01, 0.5, 1, c.truth.rho()};
    auto r = dejitter_line(c.image, params);
    ++total;
    if (r.energy <= line_energy(c.image, c.truth, params) + 1e-9) ++below_truth;
    const double acc = displacement_accuracy(r.displacement, c.truth, true);
    min_accuracy = std::min(min_accuracy, acc);
    if (acc == 1.0) ++exact;
    line_instances.push_back({format("stripes %d", static_cast<int>(seed)), original, std::move(c), std::move(r)});
  }
  // Unframed scenes, reported for reference only.
  int unframed_below = 0;
  double unframed_acc = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto original = scene_image(64, 64, seed % 2 ? 3 : 1, seed);
    const auto c = synthesize_line(original, {kSigma2, 0.0, seed, JitterKind::line});
    const EnergyParams params{0.01, 0.5, 1, c.truth.rho()};
    const auto r = dejitter_line(c.image, params);
    if (r.energy <= line_energy(c.image, c.truth, params) + 1e-9) ++unframed_below;
    unframed_acc += displacement_accuracy(r.displacement, c.truth, true) / 20.0;
  }
  report.criterion(3, "line jitter DP energy <= energy of the true displacement; stripes recovered modulo shift",
                   below_truth == total && exact == 10,
                   {format("energy <= truth on %d/%d instances (64x64, sigma^2 = 1.5, alpha = 0.01, p = 0.5)",
                           below_truth, total),
                    format("stripe accuracy modulo shift = 1.0 on %d/10 (minimum %.4f)", exact, min_accuracy),
                    format("info: unframed scenes energy <= truth on %d/20, mean accuracy modulo shift %.3f",
                           unframed_below, unframed_acc)});
}

void line_crops(Report& report) {
  int matched = 0;
  int total = 0;
  double worst = 0.0;
  Uniform pick(77);
  for (const auto& inst : line_instances) {
    const auto& img = inst.corrupted.image;
    for (int k = 0; k < 2; ++k) {
      const int x = kFrame + pick.below(img.width() - 2 * kFrame - 5);
      const int y = pick.below(img.height() - 6);
      const auto piece = crop(img, x, y, 5, 6);
      const EnergyParams params{0.01, 0.5, 1 + k, 1 + pick.below(2)};
      const double dp = dejitter_line(piece, params).energy;
      const double brute = brute_force_chain(build_line_problem(piece, params)).energy;
      worst = std::max(worst, std::fabs(dp - brute) / std::max(std::fabs(brute), 1e-300));
      ++total;
      if (close_rel(dp, brute, kRelTol)) ++matched;
    }
  }
  report.criterion(4, "line jitter on 5x6 crops (rho <= 2, orders 1 and 2) matches enumeration",
                   matched == total, {format("matched %d/%d, worst relative gap %.2e", matched, total, worst)});
}

void line_pixel_decomposition(Report& report) {
  int consistent = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto original = scene_image(32, 32, seed % 2 ? 3 : 1, 200 + seed);
    const auto c = synthesize_line_pixel(original, {kSigma2, 0.0, seed, JitterKind::line_pixel});
    const double alphas[] = {0.0, 4.0, 5.0, 0.5};
    const EnergyParams params{alphas[seed % 4], 0.5, 1 + static_cast<int>((seed / 4) % 2), c.truth.rho()};
    const auto r = dejitter_line_pixel(c.image, params);
    const double direct = line_pixel_energy(c.image, r.displacement, params);
    worst = std::max(worst, std::fabs(r.energy - direct) / std::max(std::fabs(direct), 1e-300));
    if (close_rel(r.energy, direct, kRelTol)) ++consistent;
  }
  int columns = 0;
  int optimal = 0;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto original = scene_image(24, 24, seed % 2 ? 3 : 1, 300 + seed);
    const auto c = synthesize_line_pixel(original, {kSigma2, 0.0, seed, JitterKind::line_pixel});
    const int n = 4 + static_cast<int>(seed % 3);
    const auto piece = crop(c.image, 4, 3, 6, n);
    const EnergyParams params{seed % 3 == 0 ? 0.0 : 4.0, 0.5, 1 + static_cast<int>(seed % 2),
                              1 + static_cast<int>((seed / 2) % 2)};
    const auto r = dejitter_line_pixel(piece, params);
    for (int i = 0; i < piece.width(); ++i) {
      const auto problem = build_column_problem(piece, i, params);
      std::vector<std::size_t> labels;
      for (int j = 0; j < n; ++j) labels.push_back(static_cast<std::size_t>(r.displacement.at(i, j) + params.rho));
      ++columns;
      if (close_rel(evaluate(problem, labels), brute_force_chain(problem).energy, kRelTol)) ++optimal;
    }
  }
  report.criterion(5, "line pixel jitter energy equals direct evaluation; every column optimal",
                   consistent == 20 && optimal == columns,
                   {format("direct evaluation agrees on %d/20 (32x32), worst relative gap %.2e", consistent, worst),
                    format("column oracle (n <= 6, rho <= 2) optimal on %d/%d columns", optimal, columns)});
}

void bcd_monotone(Report& report) {
  int monotone = 0;
  int consistent = 0;
  int stable = 0;
  int sweeps = 0;
  int converged = 0;
  double largest_rise = -INFINITY;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto original = scene_image(32, 32, 3, 400 + seed);
    auto c = synthesize_pixel(original, {kSigma2, 0.0, seed, JitterKind::pixel});
    const EnergyParams params{4.0, 0.5, 1, c.truth.rho()};
    auto r = dejitter_pixel(c.image, params, {4, 1});
    bool ok = true;
    double last = r.trace.initial_energy;
    for (const auto& s : r.trace.sweeps) {
      largest_rise = std::max(largest_rise, s.energy - last);
      if (s.energy > last + kMonotoneTol) ok = false;
      last = s.energy;
    }
    sweeps += static_cast<int>(r.trace.sweeps.size());
    if (ok) ++monotone;
    if (close_rel(last, pixel_energy(c.image, r.displacement, params), kRelTol)) ++consistent;
    if (r.trace.converged) ++converged;

    // Continue to a fixed point, then check that one more cycle changes nothing.
    auto fixed = r.trace.converged ? r : dejitter_pixel(c.image, params, {64, 1});
    if (fixed.trace.converged) {
      auto f = fixed.displacement;
      for (int t = 0; t < 4; ++t) f = bcd_sweep(c.image, f, params, sweep_kind(t));
      if (f == fixed.displacement) ++stable;
    }
    pixel_instances.push_back({original, std::move(c), std::move(r)});
  }
  report.criterion(6, "block coordinate descent traces are non-increasing and fixed points are stable",
                   monotone == 20 && consistent == 20 && stable == 20,
                   {format("monotone on %d/20 traces (32x32 RGB, alpha = 4, p = 0.5, up to 4 rounds, %d sweeps)",
                           monotone, sweeps),
                    format("largest energy change between sweeps %+.3e", largest_rise),
                    format("final energy matches recomputation on %d/20", consistent),
                    format("stopped early on %d/20; fixed point stable on %d/20", converged, stable)});
}

void bcd_tiny(Report& report) {
  int descended = 0;
  int global = 0;
  double worst_gap = 0.0;
  double mean_gap = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto img = random_image(3, 3, 1, 2024 + seed);
    const EnergyParams params{0.1, 1.0, 1, 1};
    const auto r = dejitter_pixel(img, params, {100, 1});
    const double e = pixel_energy(img, r.displacement, params);
    const double zero = pixel_energy(img, VectorField::zeros(3, 3, 1), params);
    const double best = brute_force_pixel_energy(img, params).energy;
    if (e <= zero + 1e-9) ++descended;
    const double gap = e - best;
    if (gap <= 1e-9) ++global;
    worst_gap = std::max(worst_gap, gap);
    mean_gap += gap / 20.0;
  }
  report.criterion(7, "descent on 3x3 images (rho = 1) never ends above the zero field",
                   descended == 20,
                   {format("energy <= zero-field energy on %d/20", descended),
                    format("gap to global optimum: reached on %d/20, mean %.4f, max %.4f", global, mean_gap,
                           worst_gap)});
}

void psnr_improvement(Report& report) {
  int improved = 0;
  int total = 0;
  double min_gain = INFINITY;
  for (const auto& inst : line_instances) {
    const double before = psnr(inst.corrupted.image, inst.original);
    const double after = psnr(inst.result.reconstruction, inst.original);
    ++total;
    if (after > before) ++improved;
    min_gain = std::min(min_gain, after - before);
  }
  const int line_total = total;
  const int line_improved = improved;
  for (const auto& inst : pixel_instances) {
    const double before = psnr(inst.corrupted.image, inst.original);
    const double after = psnr(inst.result.reconstruction, inst.original);
    ++total;
    if (after > before) ++improved;
    min_gain = std::min(min_gain, after - before);
  }
  report.criterion(8, "reconstructions have higher PSNR than the corrupted images",
                   improved == total,
                   {format("line jitter: %d/%d improved", line_improved, line_total),
                    format("pixel jitter: %d/%d improved", improved - line_improved, total - line_total),
                    format("smallest gain %.2f dB", min_gain)});
}

void complexity(Report& report) {
  const auto narrow = scene_image(128, 512, 3, 900);
  const auto wide = scene_image(256, 512, 3, 900);
  const EnergyParams line_params{0.01, 0.5, 1, 3};
  const auto line = measure_scaling([&] { dejitter_line(narrow, line_params); },
                                    [&] { dejitter_line(wide, line_params); }, 11);
  const bool line_ok = line.ratio >= 1.5 && line.ratio <= 3.5;

  const auto img = scene_image(128, 128, 3, 901);
  const EnergyParams rho1{4.0, 0.5, 1, 1};
  const EnergyParams rho2{4.0, 0.5, 1, 2};
  const auto zero1 = VectorField::zeros(128, 128, 1);
  const auto zero2 = VectorField::zeros(128, 128, 2);
  const auto pixel = measure_scaling([&] { bcd_sweep(img, zero1, rho1, SweepKind::odd_columns); },
                                     [&] { bcd_sweep(img, zero2, rho2, SweepKind::odd_columns); }, 11);
  const double expected = std::pow(2.0 / 1.0, 4);
  const bool pixel_ok = pixel.ratio >= expected / 3.0 && pixel.ratio <= expected * 3.0;
  const double label_model = std::pow(5.0 / 3.0, 4);
  report.criterion(9, "running time scales as predicted", line_ok && pixel_ok,
                   {format("line jitter rho = 3, 512 rows, width 128 -> 256: %.4f s -> %.4f s, ratio %.2f "
                           "(want [1.5, 3.5])",
                           line.small, line.large, line.ratio),
                    format("pixel sweep 128x128, rho 1 -> 2: %.4f s -> %.4f s, ratio %.2f (rho^4 ratio %.0f, want "
                           "[%.2f, %.0f]; label-count ratio (5/3)^4 = %.2f)",
                           pixel.small, pixel.large, pixel.ratio, expected, expected / 3.0, expected * 3.0,
                           label_model)});
}

struct PipelineConfig {
  const char* kind;
  double alpha;
  double p;
  int order;
  bool noisy;
};

void pipeline(Report& report) {
  TempDir dir;
  const auto original = dir / "original.png";
  write_png(scene_image(128, 128, 3, 2016), original);
  const PipelineConfig configs[] = {
      {"line", 0.0, 0.5, 1, false},       {"line", 0.0, 0.5, 2, false},       {"line", 0.01, 0.5, 1, false},
      {"line", 0.01, 0.5, 2, false},      {"line", 0.0, 3.0, 1, true},        {"line", 0.0, 3.0, 2, true},
      {"line", 1000.0, 3.0, 1, true},     {"line", 1000.0, 3.0, 2, true},     {"line-pixel", 0.0, 0.5, 1, false},
      {"line-pixel", 0.0, 0.5, 2, false}, {"line-pixel", 4.0, 0.5, 1, false}, {"line-pixel", 4.0, 0.5, 2, false},
      {"line-pixel", 0.0, 0.5, 1, true},  {"line-pixel", 0.0, 0.5, 2, true},  {"line-pixel", 5.0, 0.5, 1, true},
      {"line-pixel", 5.0, 0.5, 2, true},  {"pixel", 4.0, 0.5, 1, false},      {"pixel", 4.0, 0.5, 1, true},
  };
  bool all_ok = true;
  std::vector<std::string> details;
  int index = 0;
  for (const auto& cfg : configs) {
    const auto syn = dir / format("syn%02d", index);
    const auto fix = dir / format("fix%02d", index);
    ++index;
    const auto start = Clock::now();
    std::ostringstream out, err;
    const auto call = [&](std::vector<std::string> args) {
      args.insert(args.begin(), "dejitter");
      std::vector<const char*> argv;
      for (const auto& a : args) argv.push_back(a.c_str());
      return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    };
    int code = call({"synthesize", original.string(), syn.string(), "--kind", cfg.kind, "--sigma2", "1.5",
                     "--noise-sigma2", cfg.noisy ? format("%g", kNoiseSigma2) : "0", "--seed", "2016"});
    if (code == 0) {
      code = call({"dejitter", (syn / cli::kCorruptedName).string(), fix.string(), "--kind", cfg.kind, "--alpha",
                   format("%g", cfg.alpha), "--p", format("%g", cfg.p), "--order", std::to_string(cfg.order), "--rho",
                   "auto", "--manifest", (syn / cli::kManifestName).string(), "--rounds", "4"});
    }
    if (code == 0) {
      code = call({"evaluate", "--original", original.string(), "--reconstructed",
                   (fix / cli::kReconstructedName).string(), "--truth", (syn / cli::kTruthName).string(),
                   "--estimate", (fix / cli::kEstimateName).string(), "--output", (fix / "report.json").string()});
    }
    const double elapsed = seconds_since(start);
    const bool files = std::filesystem::exists(syn / cli::kManifestName) &&
                       std::filesystem::exists(syn / cli::kCorruptedName) &&
                       std::filesystem::exists(fix / cli::kReconstructedName) &&
                       std::filesystem::exists(fix / cli::kResultName);
    const bool ok = code == 0 && files && elapsed < 60.0;
    all_ok = all_ok && ok;
    std::string line = format("%-10s alpha=%-6g p=%-3g k=%d %-8s %6.2f s %s", cfg.kind, cfg.alpha, cfg.p, cfg.order,
                              cfg.noisy ? "noisy" : "clean", elapsed, ok ? "ok" : "FAILED");
    if (!err.str().empty()) line += " " + err.str().substr(0, err.str().find('\n'));
    details.push_back(line);
  }
  report.criterion(10, "full synthesize/dejitter/evaluate pipeline on 128x128 in < 60 s per configuration", all_ok,
                   details);
}

}  // namespace

int main() {
  Report report;
  chain_oracle(report);
  ternary_oracle(report);
  line_optimality(report);
  line_crops(report);
  line_pixel_decomposition(report);
  bcd_monotone(report);
  bcd_tiny(report);
  psnr_improvement(report);
  complexity(report);
  pipeline(report);
  std::printf("%d of 10 criteria passed\n", 10 - report.failures);
  return report.failures == 0 ? 0 : 1;
}
