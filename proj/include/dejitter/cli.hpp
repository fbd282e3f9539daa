#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "dejitter/synthesis.hpp"

namespace dejitter::cli {

/// Invalid flag or flag combination; reported with exit status 2.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string subcommand;
  std::filesystem::path input;
  std::filesystem::path output_dir;
  JitterKind kind = JitterKind::line;

  // dejitter
  double alpha = 0.0;
  double p = 0.5;
  int order = 1;
  std::string rho = "auto";  // integer or "auto"
  std::optional<std::filesystem::path> manifest;
  std::optional<std::filesystem::path> truth;
  int max_rounds = 4;
  std::optional<std::filesystem::path> trace;
  unsigned threads = 1;

  // synthesize
  double sigma2 = 1.5;
  double noise_sigma2 = 0.0;
  std::uint64_t seed = 0;

  // evaluate
  std::filesystem::path original;
  std::filesystem::path reconstructed;
  std::optional<std::filesystem::path> estimate;
  std::optional<std::filesystem::path> report;
};

// Output file names inside the output directory.
inline constexpr const char* kCorruptedName = "corrupted.png";
inline constexpr const char* kTruthName = "truth.txt";
inline constexpr const char* kManifestName = "manifest.json";
inline constexpr const char* kReconstructedName = "reconstructed.png";
inline constexpr const char* kEstimateName = "estimate.txt";
inline constexpr const char* kResultName = "result.json";
inline constexpr const char* kTraceName = "trace.csv";

/// Writes corrupted.png, truth.txt and manifest.json; prints the manifest.
void cmd_synthesize(const RunConfig& cfg, std::ostream& out);
/// Writes reconstructed.png, estimate.txt, result.json (and trace.csv for
/// pixel jitter); prints the result.
void cmd_dejitter(const RunConfig& cfg, std::ostream& out);
/// Prints the quality report as JSON (and writes it to `report` if set).
void cmd_evaluate(const RunConfig& cfg, std::ostream& out);

/// Resolves the displacement bound: an explicit integer, or "auto" taken from
/// the manifest's realised bound, else from the truth file's largest entry.
int resolve_rho(const RunConfig& cfg);

/// Full command-line entry point. Returns 0 on success, 2 on usage errors and
/// 1 on any other failure, with a one-line diagnostic on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dejitter::cli
