#pragma once

// Pixel jitter: a 2-D shift per pixel, estimated by block coordinate descent
// on
//
//   alpha * sum |d_ij|_2^2 + sum_{i>=1} |v(i,j) - v(i-1,j)|_p^p
//                          + sum_{j>=1} |v(i,j) - v(i,j-1)|_p^p,
//   v(i,j) = sample(img, i - dx_ij, j - dy_ij).
//
// Each sweep fixes every other column (or row) and solves the remaining lines
// exactly, one chain each, with labels running over {-rho..rho}^2.

#include <string>
#include <vector>

#include "dejitter/fields.hpp"
#include "dejitter/image.hpp"

namespace dejitter {

/// Sweep schedule. "Odd" and "even" count lines from one, so odd columns are
/// the zero-based indices 0, 2, 4, ...
enum class SweepKind { odd_columns, even_columns, odd_rows, even_rows };

const char* to_string(SweepKind kind);

/// Kind of sweep t (zero-based) in the cyclic schedule.
SweepKind sweep_kind(int t);

struct SweepRecord {
  int sweep;  // one-based
  SweepKind kind;
  double energy;
};

struct BcdTrace {
  double initial_energy = 0.0;
  std::vector<SweepRecord> sweeps;
  int rounds = 0;          // full four-sweep cycles performed
  bool converged = false;  // a full cycle left every label unchanged

  /// CSV with header "sweep,kind,energy"; sweep 0 is the initial field.
  std::string to_csv() const;
};

/// Label index of an offset: (dx + rho) * (2 rho + 1) + (dy + rho), so
/// labels order lexicographically by (dx, dy).
inline int offset_label(Offset d, int rho) { return (d.dx + rho) * (2 * rho + 1) + (d.dy + rho); }
inline Offset label_offset(int label, int rho) {
  const int side = 2 * rho + 1;
  return {label / side - rho, label % side - rho};
}

double pixel_energy(const Image& img, const VectorField& field, const EnergyParams& params);

/// One block update: every selected line is re-solved exactly with all other
/// lines held at `field`. Selected lines are never adjacent, so they are
/// independent and may be solved concurrently.
VectorField bcd_sweep(const Image& img, const VectorField& field, const EnergyParams& params,
                      SweepKind kind, unsigned threads = 1);

struct PixelSolverOptions {
  int max_rounds = 4;
  unsigned threads = 1;
};

struct PixelResult {
  VectorField displacement;
  Image reconstruction;
  BcdTrace trace;
};

/// Block coordinate descent from the zero field. Stops after `max_rounds`
/// cycles or once a whole cycle changes no label. alpha = 0 is accepted but
/// tends to give poor reconstructions.
PixelResult dejitter_pixel(const Image& img, const EnergyParams& params,
                           const PixelSolverOptions& options = {});

/// out(i, j) = sample(img, i - dx_ij, j - dy_ij).
Image reconstruct_pixel(const Image& img, const VectorField& d);

}  // namespace dejitter
