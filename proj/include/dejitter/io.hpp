#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>

#include "dejitter/fields.hpp"
#include "dejitter/image.hpp"

namespace dejitter {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reads an 8-bit grayscale or RGB PNG; values are mapped to [0,1] by /255.
/// Palette and sub-byte grayscale images are expanded. Images with an alpha
/// channel or 16-bit samples are rejected.
Image read_png(const std::filesystem::path& path);

/// Writes the image as 8-bit PNG, rounding value*255 to the nearest integer.
void write_png(const Image& img, const std::filesystem::path& path);

// Plain-text displacement formats:
//   line:   one integer per row
//   scalar: "m n" header, then n rows of m integers
//   vector: "m n" header, then n rows of m "d1,d2" pairs
// Fields read back carry the largest magnitude present as their bound.

void write_field(std::ostream& out, const LineDisplacement& d);
void write_field(std::ostream& out, const ScalarField& d);
void write_field(std::ostream& out, const VectorField& d);

LineDisplacement read_line_displacement(std::istream& in);
ScalarField read_scalar_field(std::istream& in);
VectorField read_vector_field(std::istream& in);

using AnyField = std::variant<LineDisplacement, ScalarField, VectorField>;

/// Detects the format: a one-token first line is a line displacement, a
/// comma in the body marks a vector field.
AnyField read_any_field(std::istream& in);

template <class Field>
void save_field(const std::filesystem::path& path, const Field& d);
AnyField load_field(const std::filesystem::path& path);

}  // namespace dejitter
