#include "curricomp/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace curricomp {

namespace {

// Skips whitespace and '#' comment lines, then reads one ASCII token.
std::string next_token(std::istream& in) {
  std::string tok;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c)) {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  return tok;
}

std::size_t parse_dim(const std::string& tok, const std::filesystem::path& path,
                      const char* what) {
  try {
    const long v = std::stol(tok);
    if (v <= 0) throw std::invalid_argument("nonpositive");
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw std::runtime_error("ppm: bad " + std::string(what) + " '" + tok + "' in " +
                             path.string());
  }
}

}  // namespace

Tensor read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("ppm: cannot open " + path.string());

  const std::string magic = next_token(in);
  if (magic != "P6") {
    throw std::runtime_error("ppm: " + path.string() + " is not a binary PPM (P6)");
  }
  const std::size_t width = parse_dim(next_token(in), path, "width");
  const std::size_t height = parse_dim(next_token(in), path, "height");
  const std::size_t maxval = parse_dim(next_token(in), path, "maxval");
  if (maxval != 255) {
    throw std::runtime_error("ppm: " + path.string() + " has maxval " + std::to_string(maxval) +
                             "; only 255 is supported");
  }
  // next_token consumed exactly one whitespace byte after the maxval.

  std::vector<unsigned char> raw(width * height * 3);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
    throw std::runtime_error("ppm: " + path.string() + " is truncated");
  }

  Tensor image = Tensor::zeros({height, width, 3});
  for (std::size_t i = 0; i < raw.size(); ++i) {
    image.data[i] = static_cast<double>(raw[i]) / 255.0;
  }
  return image;
}

void write_ppm(const std::filesystem::path& path, const Tensor& image) {
  if (image.rank() != 3 || image.dim(2) != 3) {
    throw std::invalid_argument("ppm: image must be HxWx3");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("ppm: cannot open " + path.string() + " for writing");

  out << "P6\n" << image.dim(1) << " " << image.dim(0) << "\n255\n";
  std::vector<unsigned char> raw(image.numel());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double v = std::clamp(image.data[i], 0.0, 1.0);
    raw[i] = static_cast<unsigned char>(std::lround(v * 255.0));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw std::runtime_error("ppm: write failed for " + path.string());
}

Tensor load_image(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".ppm" || ext == ".PPM") return read_ppm(path);
  throw std::runtime_error("image: unsupported format '" + ext + "' for " + path.string() +
                           " (supported: .ppm)");
}

Tensor bilinear_resize(const Tensor& image, std::size_t out_h, std::size_t out_w) {
  if (image.rank() != 3) throw std::invalid_argument("resize: image must be HxWxC");
  const std::size_t in_h = image.dim(0);
  const std::size_t in_w = image.dim(1);
  const std::size_t channels = image.dim(2);
  if (in_h == out_h && in_w == out_w) return image;
  if (out_h == 0 || out_w == 0) throw std::invalid_argument("resize: zero output size");

  Tensor out = Tensor::zeros({out_h, out_w, channels});
  const double sy = static_cast<double>(in_h) / static_cast<double>(out_h);
  const double sx = static_cast<double>(in_w) / static_cast<double>(out_w);

  for (std::size_t y = 0; y < out_h; ++y) {
    const double fy = std::max(0.0, (static_cast<double>(y) + 0.5) * sy - 0.5);
    std::size_t y0 = static_cast<std::size_t>(fy);
    if (y0 >= in_h - 1) y0 = in_h - 1;
    const std::size_t y1 = std::min(y0 + 1, in_h - 1);
    const double wy = fy - static_cast<double>(y0);
    for (std::size_t x = 0; x < out_w; ++x) {
      const double fx = std::max(0.0, (static_cast<double>(x) + 0.5) * sx - 0.5);
      std::size_t x0 = static_cast<std::size_t>(fx);
      if (x0 >= in_w - 1) x0 = in_w - 1;
      const std::size_t x1 = std::min(x0 + 1, in_w - 1);
      const double wx = fx - static_cast<double>(x0);
      for (std::size_t c = 0; c < channels; ++c) {
        const double top = image.at3(y0, x0, c) * (1.0 - wx) + image.at3(y0, x1, c) * wx;
        const double bot = image.at3(y1, x0, c) * (1.0 - wx) + image.at3(y1, x1, c) * wx;
        out.at3(y, x, c) = top * (1.0 - wy) + bot * wy;
      }
    }
  }
  return out;
}

}  // namespace curricomp
