#include "dejitter/io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace dejitter {

namespace {

struct PngImage {
  png_image image{};
  PngImage() { image.version = PNG_IMAGE_VERSION; }
  ~PngImage() { png_image_free(&image); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

std::string png_message(const png_image& image) { return image.message; }

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    lines.push_back(line);
  }
  return lines;
}

int parse_int(const std::string& token) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(token, &used);
  } catch (const std::exception&) {
    throw IoError("malformed integer '" + token + "'");
  }
  if (used != token.size()) throw IoError("malformed integer '" + token + "'");
  return value;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

std::pair<int, int> parse_header(const std::vector<std::string>& lines) {
  if (lines.empty()) throw IoError("empty displacement file");
  const auto head = tokens(lines[0]);
  if (head.size() != 2) throw IoError("displacement field header must be 'm n'");
  const int m = parse_int(head[0]);
  const int n = parse_int(head[1]);
  if (m < 1 || n < 1) throw IoError("displacement field header has non-positive size");
  if (lines.size() != static_cast<std::size_t>(n) + 1) {
    throw IoError("displacement field has " + std::to_string(lines.size() - 1) + " rows, expected " +
                  std::to_string(n));
  }
  return {m, n};
}

template <class Row>
void check_row(const Row& row, int m, std::size_t index) {
  if (row.size() != static_cast<std::size_t>(m)) {
    throw IoError("displacement row " + std::to_string(index) + " has " + std::to_string(row.size()) +
                  " entries, expected " + std::to_string(m));
  }
}

LineDisplacement parse_line(const std::vector<std::string>& lines) {
  if (lines.empty()) throw IoError("empty displacement file");
  std::vector<int> values;
  for (const auto& line : lines) {
    const auto t = tokens(line);
    if (t.size() != 1) throw IoError("line displacement rows must hold one integer");
    values.push_back(parse_int(t[0]));
  }
  return LineDisplacement::with_realized_bound(std::move(values));
}

ScalarField parse_scalar(const std::vector<std::string>& lines) {
  const auto [m, n] = parse_header(lines);
  std::vector<int> values;
  values.reserve(static_cast<std::size_t>(m) * n);
  for (int j = 0; j < n; ++j) {
    const auto row = tokens(lines[j + 1]);
    check_row(row, m, j);
    for (const auto& t : row) values.push_back(parse_int(t));
  }
  return ScalarField::with_realized_bound(m, n, std::move(values));
}

VectorField parse_vector(const std::vector<std::string>& lines) {
  const auto [m, n] = parse_header(lines);
  std::vector<Offset> values;
  values.reserve(static_cast<std::size_t>(m) * n);
  for (int j = 0; j < n; ++j) {
    const auto row = tokens(lines[j + 1]);
    check_row(row, m, j);
    for (const auto& t : row) {
      const auto comma = t.find(',');
      if (comma == std::string::npos) throw IoError("vector entry '" + t + "' is not 'd1,d2'");
      values.push_back({parse_int(t.substr(0, comma)), parse_int(t.substr(comma + 1))});
    }
  }
  return VectorField::with_realized_bound(m, n, std::move(values));
}

}  // namespace

Image read_png(const std::filesystem::path& path) {
  PngImage png;
  if (!png_image_begin_read_from_file(&png.image, path.string().c_str())) {
    throw IoError("cannot read PNG '" + path.string() + "': " + png_message(png.image));
  }
  const auto format = png.image.format;
  if (format & PNG_FORMAT_FLAG_ALPHA) {
    throw IoError("PNG '" + path.string() + "' has an alpha channel; only grayscale and RGB are supported");
  }
  if (format & PNG_FORMAT_FLAG_LINEAR) {
    throw IoError("PNG '" + path.string() + "' uses 16-bit samples; only 8-bit images are supported");
  }
  const bool color = (format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int channels = color ? 3 : 1;
  const int width = static_cast<int>(png.image.width);
  const int height = static_cast<int>(png.image.height);
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(png.image));
  if (!png_image_finish_read(&png.image, nullptr, buffer.data(), 0, nullptr)) {
    throw IoError("cannot decode PNG '" + path.string() + "': " + png_message(png.image));
  }
  std::vector<double> data(buffer.size());
  std::transform(buffer.begin(), buffer.end(), data.begin(), [](std::uint8_t v) { return v / 255.0; });
  return {width, height, channels, std::move(data)};
}

void write_png(const Image& img, const std::filesystem::path& path) {
  PngImage png;
  png.image.width = static_cast<png_uint_32>(img.width());
  png.image.height = static_cast<png_uint_32>(img.height());
  png.image.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> buffer(img.data().size());
  std::transform(img.data().begin(), img.data().end(), buffer.begin(), [](double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
  });
  if (!png_image_write_to_file(&png.image, path.string().c_str(), 0, buffer.data(), 0, nullptr)) {
    throw IoError("cannot write PNG '" + path.string() + "': " + png_message(png.image));
  }
}

void write_field(std::ostream& out, const LineDisplacement& d) {
  for (int v : d.values()) out << v << '\n';
}

void write_field(std::ostream& out, const ScalarField& d) {
  out << d.width() << ' ' << d.height() << '\n';
  for (int j = 0; j < d.height(); ++j) {
    for (int i = 0; i < d.width(); ++i) out << (i ? " " : "") << d.at(i, j);
    out << '\n';
  }
}

void write_field(std::ostream& out, const VectorField& d) {
  out << d.width() << ' ' << d.height() << '\n';
  for (int j = 0; j < d.height(); ++j) {
    for (int i = 0; i < d.width(); ++i) {
      const Offset o = d.at(i, j);
      out << (i ? " " : "") << o.dx << ',' << o.dy;
    }
    out << '\n';
  }
}

LineDisplacement read_line_displacement(std::istream& in) { return parse_line(read_lines(in)); }
ScalarField read_scalar_field(std::istream& in) { return parse_scalar(read_lines(in)); }
VectorField read_vector_field(std::istream& in) { return parse_vector(read_lines(in)); }

AnyField read_any_field(std::istream& in) {
  const auto lines = read_lines(in);
  if (lines.empty()) throw IoError("empty displacement file");
  if (tokens(lines[0]).size() == 1) return parse_line(lines);
  const bool pairs = lines.size() > 1 && lines[1].find(',') != std::string::npos;
  if (pairs) return parse_vector(lines);
  return parse_scalar(lines);
}

template <class Field>
void save_field(const std::filesystem::path& path, const Field& d) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_field(out, d);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

template void save_field(const std::filesystem::path&, const LineDisplacement&);
template void save_field(const std::filesystem::path&, const ScalarField&);
template void save_field(const std::filesystem::path&, const VectorField&);

AnyField load_field(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open displacement file '" + path.string() + "'");
  return read_any_field(in);
}

}  // namespace dejitter
