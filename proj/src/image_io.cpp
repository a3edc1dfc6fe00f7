#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "spdtraj/error.hpp"
#include "spdtraj/image.hpp"

namespace spdtraj {

double Image::clamped(long x, long y) const {
  x = std::clamp<long>(x, 0, static_cast<long>(width) - 1);
  y = std::clamp<long>(y, 0, static_cast<long>(height) - 1);
  return pixels[static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x)];
}

Image Image::crop(std::size_t x0, std::size_t y0, std::size_t w, std::size_t h) const {
  if (x0 + w > width || y0 + h > height) throw ValidationError("image crop outside the frame");
  Image out(w, h);
  for (std::size_t y = 0; y < h; ++y)
    std::copy_n(pixels.begin() + static_cast<long>((y0 + y) * width + x0), w,
                out.pixels.begin() + static_cast<long>(y * w));
  return out;
}

Image Image::resized(std::size_t w, std::size_t h) const {
  if (w == width && h == height) return *this;
  if (w == 0 || h == 0 || width == 0 || height == 0)
    throw ValidationError("image resize: empty size");
  Image out(w, h);
  const double sx = static_cast<double>(width) / static_cast<double>(w);
  const double sy = static_cast<double>(height) / static_cast<double>(h);
  for (std::size_t y = 0; y < h; ++y) {
    const double fy = std::max(0.0, (static_cast<double>(y) + 0.5) * sy - 0.5);
    const auto y0 = static_cast<long>(fy);
    const double ty = fy - static_cast<double>(y0);
    for (std::size_t x = 0; x < w; ++x) {
      const double fx = std::max(0.0, (static_cast<double>(x) + 0.5) * sx - 0.5);
      const auto x0 = static_cast<long>(fx);
      const double tx = fx - static_cast<double>(x0);
      const double top = (1 - tx) * clamped(x0, y0) + tx * clamped(x0 + 1, y0);
      const double bot = (1 - tx) * clamped(x0, y0 + 1) + tx * clamped(x0 + 1, y0 + 1);
      out.at(x, y) = (1 - ty) * top + ty * bot;
    }
  }
  return out;
}

namespace {

std::string lower_ext(const std::filesystem::path& p) {
  std::string e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e;
}

// Next header token, skipping whitespace and # comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  for (;;) {
    const int c = in.get();
    if (c == EOF) break;
    if (c == '#') {
      std::string rest;
      std::getline(in, rest);
      if (!tok.empty()) break;
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

}  // namespace

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  const std::string magic = pgm_token(in);
  if (magic != "P2" && magic != "P5") throw ValidationError(path.string() + ": not a PGM file");
  std::size_t w = 0, h = 0;
  long maxval = 0;
  try {
    w = std::stoul(pgm_token(in));
    h = std::stoul(pgm_token(in));
    maxval = std::stol(pgm_token(in));
  } catch (const std::exception&) {
    throw ValidationError(path.string() + ": malformed PGM header");
  }
  if (w == 0 || h == 0 || maxval <= 0 || maxval > 65535)
    throw ValidationError(path.string() + ": bad PGM dimensions");
  Image img(w, h);
  const double scale = 1.0 / static_cast<double>(maxval);
  if (magic == "P2") {
    for (auto& p : img.pixels) {
      long v;
      if (!(in >> v)) throw ValidationError(path.string() + ": truncated PGM data");
      p = std::clamp(static_cast<double>(v) * scale, 0.0, 1.0);
    }
    return img;
  }
  const std::size_t bytes = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> raw(w * h * bytes);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size()))
    throw ValidationError(path.string() + ": truncated PGM data");
  for (std::size_t i = 0; i < w * h; ++i) {
    const unsigned v = bytes == 1 ? raw[i] : (unsigned{raw[2 * i]} << 8) | raw[2 * i + 1];
    img.pixels[i] = std::clamp(static_cast<double>(v) * scale, 0.0, 1.0);
  }
  return img;
}

Image read_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str()))
    throw ValidationError(path.string() + ": " + image.message);
  // Decode everything to 8-bit RGB so gray and color files share one luma path.
  image.format = PNG_FORMAT_RGB;
  std::vector<unsigned char> buf(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
    png_image_free(&image);
    throw ValidationError(path.string() + ": " + image.message);
  }
  Image img(image.width, image.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    img.pixels[i] = luminance(buf[3 * i] / 255.0, buf[3 * i + 1] / 255.0, buf[3 * i + 2] / 255.0);
  return img;
}

Image read_image(const std::filesystem::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".pgm" || ext == ".pnm") return read_pgm(path);
  throw ValidationError(path.string() + ": unsupported frame format (want .pgm or .png)");
}

void write_pgm(const Image& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  std::vector<unsigned char> raw(img.pixels.size());
  for (std::size_t i = 0; i < raw.size(); ++i)
    raw[i] = static_cast<unsigned char>(std::lround(std::clamp(img.pixels[i], 0.0, 1.0) * 255.0));
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw ValidationError(dir.string() + ": not a directory");
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const std::string ext = lower_ext(e.path());
    if (ext == ".pgm" || ext == ".png" || ext == ".pnm") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace spdtraj
