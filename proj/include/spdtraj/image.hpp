#pragma once

// Grayscale frames and frame IO (binary/ASCII PGM, PNG).

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace spdtraj {

// Row-major grayscale image with intensities in [0, 1].
struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> pixels;

  Image() = default;
  Image(std::size_t w, std::size_t h, double fill = 0.0) : width(w), height(h), pixels(w * h, fill) {}

  double& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
  double at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
  // Clamped access (boundary replication).
  double clamped(long x, long y) const;

  // Pixels [x0, x0 + w) x [y0, y0 + h).
  Image crop(std::size_t x0, std::size_t y0, std::size_t w, std::size_t h) const;
  // Bilinear resampling with pixel centres aligned.
  Image resized(std::size_t w, std::size_t h) const;
};

// Rec. 601 luma.
inline double luminance(double r, double g, double b) { return 0.299 * r + 0.587 * g + 0.114 * b; }

// P2/P5 (8 or 16 bit) and PNG (any color type; color is converted to luma).
Image read_image(const std::filesystem::path& path);
Image read_pgm(const std::filesystem::path& path);
Image read_png(const std::filesystem::path& path);
// 8-bit binary PGM.
void write_pgm(const Image& img, const std::filesystem::path& path);

// Sorted *.pgm / *.png files of a directory.
std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir);

}  // namespace spdtraj
