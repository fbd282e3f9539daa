#include "dejitter/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#include "dejitter/io.hpp"
#include "dejitter/line_jitter.hpp"
#include "dejitter/line_pixel_jitter.hpp"
#include "dejitter/metrics.hpp"
#include "dejitter/pixel_jitter.hpp"

namespace dejitter::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

int field_bound(const AnyField& field) {
  return std::visit([](const auto& f) { return f.rho(); }, field);
}

json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json accuracy_report(const AnyField& est, const AnyField& truth) {
  if (est.index() != truth.index()) throw UsageError("estimate and truth files hold different field kinds");
  return std::visit(
      [&](const auto& e) -> json {
        using Field = std::decay_t<decltype(e)>;
        const auto& t = std::get<Field>(truth);
        return {{"accuracy", displacement_accuracy(e, t, false)},
                {"accuracy_modulo_shift", displacement_accuracy(e, t, true)}};
      },
      est);
}

}  // namespace

int resolve_rho(const RunConfig& cfg) {
  if (cfg.rho != "auto") {
    int rho = 0;
    std::size_t used = 0;
    try {
      rho = std::stoi(cfg.rho, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != cfg.rho.size() || rho < 0) {
      throw UsageError("--rho must be a non-negative integer or 'auto', got '" + cfg.rho + "'");
    }
    return rho;
  }
  if (cfg.manifest) {
    const auto manifest = read_json(*cfg.manifest);
    if (!manifest.contains("rho") || !manifest["rho"].is_number_integer()) {
      throw IoError("manifest '" + cfg.manifest->string() + "' has no integer 'rho'");
    }
    return manifest["rho"].get<int>();
  }
  if (cfg.truth) return field_bound(load_field(*cfg.truth));
  throw UsageError("--rho auto requires --manifest or --truth");
}

void cmd_synthesize(const RunConfig& cfg, std::ostream& out) {
  SynthesisSpec spec{cfg.sigma2, cfg.noise_sigma2, cfg.seed, cfg.kind};
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const Image img = read_png(cfg.input);
  ensure_directory(cfg.output_dir);

  int rho = 0;
  const auto truth_path = cfg.output_dir / kTruthName;
  const auto corrupted_path = cfg.output_dir / kCorruptedName;
  switch (cfg.kind) {
    case JitterKind::line: {
      auto c = synthesize_line(img, spec);
      write_png(c.image, corrupted_path);
      save_field(truth_path, c.truth);
      rho = c.truth.rho();
      break;
    }
    case JitterKind::line_pixel: {
      auto c = synthesize_line_pixel(img, spec);
      write_png(c.image, corrupted_path);
      save_field(truth_path, c.truth);
      rho = c.truth.rho();
      break;
    }
    case JitterKind::pixel: {
      auto c = synthesize_pixel(img, spec);
      write_png(c.image, corrupted_path);
      save_field(truth_path, c.truth);
      rho = c.truth.rho();
      break;
    }
  }

  const json manifest = {
      {"kind", to_string(cfg.kind)},
      {"seed", cfg.seed},
      {"sigma2", cfg.sigma2},
      {"noise_sigma2", cfg.noise_sigma2},
      {"rho", rho},
      {"width", img.width()},
      {"height", img.height()},
      {"channels", img.channels()},
      {"generator", "mt19937_64+box-muller"},
      {"input", cfg.input.string()},
      {"corrupted", kCorruptedName},
      {"truth", kTruthName},
  };
  write_text(cfg.output_dir / kManifestName, manifest.dump(2) + "\n");
  out << manifest.dump(2) << '\n';
}

void cmd_dejitter(const RunConfig& cfg, std::ostream& out) {
  if (cfg.kind == JitterKind::pixel && cfg.order != 1) {
    throw UsageError("pixel jitter supports only --order 1");
  }
  if (cfg.max_rounds < 1) throw UsageError("--rounds must be at least 1");
  EnergyParams params;
  params.alpha = cfg.alpha;
  params.p = cfg.p;
  params.order = cfg.order;
  params.rho = resolve_rho(cfg);
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const Image img = read_png(cfg.input);
  ensure_directory(cfg.output_dir);

  json result = {{"kind", to_string(cfg.kind)}, {"alpha", params.alpha}, {"p", params.p},
                 {"order", params.order},       {"rho", params.rho}};
  const auto estimate_path = cfg.output_dir / kEstimateName;
  const auto reconstructed_path = cfg.output_dir / kReconstructedName;
  switch (cfg.kind) {
    case JitterKind::line: {
      LineSolverOptions options;
      options.threads = cfg.threads;
      const auto r = dejitter_line(img, params, options);
      write_png(r.reconstruction, reconstructed_path);
      save_field(estimate_path, r.displacement);
      result["energy"] = r.energy;
      break;
    }
    case JitterKind::line_pixel: {
      const auto r = dejitter_line_pixel(img, params, cfg.threads);
      write_png(r.reconstruction, reconstructed_path);
      save_field(estimate_path, r.displacement);
      result["energy"] = r.energy;
      break;
    }
    case JitterKind::pixel: {
      const auto r = dejitter_pixel(img, params, {cfg.max_rounds, cfg.threads});
      write_png(r.reconstruction, reconstructed_path);
      save_field(estimate_path, r.displacement);
      const double energy = r.trace.sweeps.empty() ? r.trace.initial_energy : r.trace.sweeps.back().energy;
      result["energy"] = energy;
      result["rounds"] = r.trace.rounds;
      result["converged"] = r.trace.converged;
      const auto trace_path = cfg.trace.value_or(cfg.output_dir / kTraceName);
      write_text(trace_path, r.trace.to_csv());
      result["trace"] = trace_path.string();
      break;
    }
  }
  write_text(cfg.output_dir / kResultName, result.dump(2) + "\n");
  out << result.dump(2) << '\n';
}

void cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.truth.has_value() != cfg.estimate.has_value()) {
    throw UsageError("--truth and --estimate must be given together");
  }
  const Image original = read_png(cfg.original);
  const Image reconstructed = read_png(cfg.reconstructed);
  if (original.width() != reconstructed.width() || original.height() != reconstructed.height() ||
      original.channels() != reconstructed.channels()) {
    throw std::runtime_error("images differ in size or channel count");
  }
  const double error = mse(original, reconstructed);
  json report = {{"mse", error}, {"psnr", number_or_inf(psnr(original, reconstructed))}};
  if (cfg.truth) {
    const auto acc = accuracy_report(load_field(*cfg.estimate), load_field(*cfg.truth));
    report.update(acc);
  }
  if (cfg.report) write_text(*cfg.report, report.dump(2) + "\n");
  out << report.dump(2) << '\n';
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Removes line jitter, line pixel jitter and pixel jitter from images", "dejitter"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string kind = "line";
  const std::vector<std::string> kinds{"line", "line-pixel", "pixel"};

  auto* synth = app.add_subcommand("synthesize", "Corrupt an image with random jitter");
  synth->add_option("input", cfg.input, "Input PNG")->required();
  synth->add_option("output", cfg.output_dir, "Output directory")->required();
  synth->add_option("--kind", kind, "Jitter model")->check(CLI::IsMember(kinds))->required();
  synth->add_option("--sigma2", cfg.sigma2, "Displacement variance (pixels^2)")->capture_default_str();
  synth->add_option("--noise-sigma2", cfg.noise_sigma2, "Intensity noise variance")->capture_default_str();
  synth->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();

  auto* fix = app.add_subcommand("dejitter", "Estimate the displacement and reconstruct the image");
  fix->add_option("input", cfg.input, "Corrupted PNG")->required();
  fix->add_option("output", cfg.output_dir, "Output directory")->required();
  fix->add_option("--kind", kind, "Jitter model")->check(CLI::IsMember(kinds))->required();
  fix->add_option("--alpha", cfg.alpha, "Displacement regularisation weight")->capture_default_str();
  fix->add_option("--p", cfg.p, "Exponent of the data term")->capture_default_str();
  fix->add_option("--order", cfg.order, "Highest vertical derivative order (1 or 2)")->capture_default_str();
  fix->add_option("--rho", cfg.rho, "Displacement bound, or 'auto'")->capture_default_str();
  fix->add_option("--manifest", cfg.manifest, "Synthesis manifest supplying rho for --rho auto");
  fix->add_option("--truth", cfg.truth, "Ground-truth field supplying rho for --rho auto");
  fix->add_option("--rounds", cfg.max_rounds, "Maximum descent cycles (pixel jitter)")->capture_default_str();
  fix->add_option("--trace", cfg.trace, "Path of the sweep energy CSV (pixel jitter)");
  fix->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")->capture_default_str();

  auto* eval = app.add_subcommand("evaluate", "Compare a reconstruction with the original");
  eval->add_option("--original", cfg.original, "Original PNG")->required();
  eval->add_option("--reconstructed", cfg.reconstructed, "Reconstructed or corrupted PNG")->required();
  eval->add_option("--truth", cfg.truth, "Ground-truth displacement file");
  eval->add_option("--estimate", cfg.estimate, "Estimated displacement file");
  eval->add_option("--output", cfg.report, "Also write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "dejitter: " << e.what() << '\n';
    return 2;
  }

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.kind = parse_jitter_kind(kind);
    if (cfg.subcommand == "synthesize") {
      cmd_synthesize(cfg, out);
    } else if (cfg.subcommand == "dejitter") {
      cmd_dejitter(cfg, out);
    } else {
      cmd_evaluate(cfg, out);
    }
  } catch (const UsageError& e) {
    err << "dejitter: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "dejitter: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace dejitter::cli
