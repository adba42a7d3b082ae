#include "signforge/dataio/ppm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "signforge/util/error.hpp"

namespace signforge::dataio {

using numcore::Tensor;

namespace {

// next whitespace-delimited token, skipping '#' comments
std::string next_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {}
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(char(ch));
  }
  return tok;
}

std::size_t parse_size(std::istream& in, const char* what, const std::filesystem::path& path) {
  std::string tok = next_token(in);
  try {
    return std::stoul(tok);
  } catch (const std::exception&) {
    throw FormatError(FormatError::Kind::Corrupt,
                      path.string() + ": bad PPM " + what + " field '" + tok + "'");
  }
}

}  // namespace

Tensor read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image: " + path.string());

  std::string magic = next_token(in);
  if (magic != "P6" && magic != "P3") {
    throw FormatError(FormatError::Kind::BadMagic,
                      path.string() + ": unsupported image format '" + magic + "'");
  }
  std::size_t w = parse_size(in, "width", path);
  std::size_t h = parse_size(in, "height", path);
  std::size_t maxval = parse_size(in, "maxval", path);
  if (w == 0 || h == 0 || maxval == 0 || maxval > 255) {
    throw FormatError(FormatError::Kind::Corrupt, path.string() + ": bad PPM dimensions");
  }

  Tensor img({h, w, 3});
  if (magic == "P6") {
    // single whitespace byte separates header from raster
    std::vector<unsigned char> raw(h * w * 3);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!in) {
      throw FormatError(FormatError::Kind::Truncated, path.string() + ": truncated raster");
    }
    for (std::size_t i = 0; i < raw.size(); ++i) img[i] = double(raw[i]) / double(maxval);
  } else {
    for (std::size_t i = 0; i < img.size(); ++i) {
      img[i] = double(parse_size(in, "pixel", path)) / double(maxval);
    }
  }
  return img;
}

void write_ppm(const std::filesystem::path& path, const Tensor& image) {
  if (image.rank() != 3 || image.dim(2) != 3) {
    throw ShapeError("write_ppm expects HxWx3, got " + numcore::shape_to_string(image.shape()));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open image for writing: " + path.string());
  out << "P6\n" << image.dim(1) << " " << image.dim(0) << "\n255\n";
  std::vector<unsigned char> raw(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) {
    raw[i] = static_cast<unsigned char>(
        std::lround(std::clamp(image[i], 0.0, 1.0) * 255.0));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError("short write: " + path.string());
}

Tensor resize_bilinear(const Tensor& image, std::size_t out_h, std::size_t out_w) {
  const std::size_t h = image.dim(0), w = image.dim(1), c = image.dim(2);
  Tensor out({out_h, out_w, c});
  double scale_y = double(h) / double(out_h);
  double scale_x = double(w) / double(out_w);

  for (std::size_t y = 0; y < out_h; ++y) {
    double sy = std::clamp((double(y) + 0.5) * scale_y - 0.5, 0.0, double(h - 1));
    std::size_t y0 = std::size_t(sy);
    std::size_t y1 = std::min(y0 + 1, h - 1);
    double wy = sy - double(y0);
    for (std::size_t x = 0; x < out_w; ++x) {
      double sx = std::clamp((double(x) + 0.5) * scale_x - 0.5, 0.0, double(w - 1));
      std::size_t x0 = std::size_t(sx);
      std::size_t x1 = std::min(x0 + 1, w - 1);
      double wx = sx - double(x0);
      for (std::size_t ch = 0; ch < c; ++ch) {
        double top = image(y0, x0, ch) * (1.0 - wx) + image(y0, x1, ch) * wx;
        double bot = image(y1, x0, ch) * (1.0 - wx) + image(y1, x1, ch) * wx;
        out(y, x, ch) = top * (1.0 - wy) + bot * wy;
      }
    }
  }
  return out;
}

}  // namespace signforge::dataio
