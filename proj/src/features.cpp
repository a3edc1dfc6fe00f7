#include "spdtraj/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "spdtraj/error.hpp"
#include "spdtraj/parallel.hpp"

namespace spdtraj {

void FrameFeatureMap::validate() const {
  if (d < 2) throw ValidationError("feature map: need d >= 2");
  if (values.size() != count() * d) throw ValidationError("feature map: size mismatch");
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("feature map: non-finite value");
}

SpdPoint covariance_descriptor(const FrameFeatureMap& f) {
  f.validate();
  const std::size_t n = f.count();
  if (n < 2) throw ValidationError("covariance descriptor: need at least 2 locations");
  const auto d = static_cast<Eigen::Index>(f.d);
  const Eigen::Map<const Eigen::MatrixXd> x(f.values.data(), d, static_cast<Eigen::Index>(n));
  const Eigen::VectorXd mean = x.rowwise().mean();
  const Eigen::MatrixXd centred = x.colwise() - mean;
  const Matrix cov = centred * centred.transpose() / static_cast<double>(n);
  return SpdPoint(regularize_covariance(cov));
}

FrameFeatureMap intensity_features(const Image& frame) {
  const std::size_t w = frame.width, h = frame.height;
  if (w < 3 || h < 3) throw ValidationError("intensity features: frame must be at least 3x3");
  FrameFeatureMap f{w, h, 7, std::vector<double>(w * h * 7)};
  const double sx = 1.0 / static_cast<double>(w - 1);
  const double sy = 1.0 / static_cast<double>(h - 1);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const long lx = static_cast<long>(x), ly = static_cast<long>(y);
      const double c = frame.at(x, y);
      const double l = frame.clamped(lx - 1, ly), r = frame.clamped(lx + 1, ly);
      const double u = frame.clamped(lx, ly - 1), dn = frame.clamped(lx, ly + 1);
      double* out = f.values.data() + (y * w + x) * 7;
      out[0] = static_cast<double>(x) * sx;
      out[1] = static_cast<double>(y) * sy;
      out[2] = c;
      out[3] = std::abs(0.5 * (r - l));
      out[4] = std::abs(0.5 * (dn - u));
      out[5] = std::abs(r - 2.0 * c + l);
      out[6] = std::abs(dn - 2.0 * c + u);
    }
  }
  return f;
}

void image_gradients(const Image& frame, std::vector<double>& magnitude,
                     std::vector<double>& angle) {
  const std::size_t w = frame.width, h = frame.height;
  magnitude.assign(w * h, 0.0);
  angle.assign(w * h, 0.0);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const long lx = static_cast<long>(x), ly = static_cast<long>(y);
      const double gx = 0.5 * (frame.clamped(lx + 1, ly) - frame.clamped(lx - 1, ly));
      const double gy = 0.5 * (frame.clamped(lx, ly + 1) - frame.clamped(lx, ly - 1));
      magnitude[y * w + x] = std::hypot(gx, gy);
      double a = std::atan2(gy, gx);
      if (a < 0.0) a += std::numbers::pi;
      if (a >= std::numbers::pi) a -= std::numbers::pi;
      angle[y * w + x] = a;
    }
  }
}

FrameFeatureMap hog_features(const Image& frame, const HogOptions& opts, bool normalize) {
  if (opts.cell == 0 || opts.block == 0 || opts.bins < 2)
    throw ValidationError("hog: cell and block must be positive and bins >= 2");
  const std::size_t cx = frame.width / opts.cell, cy = frame.height / opts.cell;
  if (cx < opts.block || cy < opts.block)
    throw ValidationError("hog: frame is smaller than one block");
  std::vector<double> mag, ang;
  image_gradients(frame, mag, ang);

  const std::size_t bins = opts.bins;
  const double width = std::numbers::pi / static_cast<double>(bins);
  std::vector<double> cells(cx * cy * bins, 0.0);
  for (std::size_t y = 0; y < cy * opts.cell; ++y) {
    for (std::size_t x = 0; x < cx * opts.cell; ++x) {
      const std::size_t i = y * frame.width + x;
      const double pos = ang[i] / width;
      const double fl = std::floor(pos);
      const double frac = pos - fl;
      const std::size_t k0 = static_cast<std::size_t>(fl) % bins;
      const std::size_t k1 = (k0 + 1) % bins;
      double* hist = cells.data() + ((y / opts.cell) * cx + x / opts.cell) * bins;
      hist[k0] += (1.0 - frac) * mag[i];
      hist[k1] += frac * mag[i];
    }
  }

  const std::size_t bx = cx - opts.block + 1, by = cy - opts.block + 1;
  FrameFeatureMap f{bx, by, bins, std::vector<double>(bx * by * bins, 0.0)};
  for (std::size_t j = 0; j < by; ++j) {
    for (std::size_t i = 0; i < bx; ++i) {
      double* out = f.values.data() + (j * bx + i) * bins;
      for (std::size_t v = 0; v < opts.block; ++v)
        for (std::size_t u = 0; u < opts.block; ++u) {
          const double* hist = cells.data() + ((j + v) * cx + (i + u)) * bins;
          for (std::size_t k = 0; k < bins; ++k) out[k] += hist[k];
        }
      if (!normalize) continue;
      double mass = 0.0, norm = 0.0;
      for (std::size_t k = 0; k < bins; ++k) {
        mass += out[k];
        norm += out[k] * out[k];
      }
      if (mass < 1e-12) {
        std::fill(out, out + bins, 0.0);
        continue;
      }
      norm = std::sqrt(norm);
      for (std::size_t k = 0; k < bins; ++k) out[k] /= norm;
    }
  }
  return f;
}

FeatureKind parse_feature_kind(const std::string& s) {
  if (s == "intensity") return FeatureKind::Intensity;
  if (s == "hog") return FeatureKind::Hog;
  throw ValidationError("unknown feature kind '" + s + "' (want intensity or hog)");
}

const char* feature_kind_name(FeatureKind k) {
  return k == FeatureKind::Intensity ? "intensity" : "hog";
}

std::size_t feature_dim(FeatureKind k, const HogOptions& hog) {
  return k == FeatureKind::Intensity ? 7 : hog.bins;
}

SpdPoint frame_descriptor(const Image& frame, const FeatureConfig& cfg) {
  if (cfg.kind == FeatureKind::Intensity) return covariance_descriptor(intensity_features(frame));
  return covariance_descriptor(hog_features(frame, cfg.hog));
}

std::array<QuadrantBox, 4> quadrant_boxes(std::size_t width, std::size_t height, double overlap) {
  if (width < 2 || height < 2) throw ValidationError("quadrants: frame must be at least 2x2");
  if (!(overlap >= 0.0 && overlap <= 0.5)) throw ValidationError("quadrants: overlap must be in [0, 0.5]");
  auto side = [&](std::size_t n) {
    const double v = (0.5 + overlap) * static_cast<double>(n);
    // Guard against 0.6 * 10 = 6.000000000000001.
    const auto s = static_cast<std::size_t>(std::ceil(v - 1e-9 * std::max(1.0, v)));
    return std::clamp<std::size_t>(s, 1, n);
  };
  const std::size_t w = side(width), h = side(height);
  return {{{0, 0, w, h}, {width - w, 0, w, h}, {0, height - h, w, h}, {width - w, height - h, w, h}}};
}

std::array<SpdPoint, 4> quadrant_descriptors(const Image& frame, const FeatureConfig& cfg) {
  const auto boxes = quadrant_boxes(frame.width, frame.height, cfg.overlap);
  auto one = [&](int k) {
    const auto& b = boxes[static_cast<std::size_t>(k)];
    return frame_descriptor(frame.crop(b.x0, b.y0, b.w, b.h), cfg);
  };
  return {one(0), one(1), one(2), one(3)};
}

std::vector<Trajectory<SpdManifold>> video_to_trajectory(const std::vector<Image>& frames,
                                                         const FeatureConfig& cfg,
                                                         std::size_t jobs) {
  if (frames.size() < 2) throw ValidationError("video: need at least 2 frames");
  const std::size_t w = frames.front().width, h = frames.front().height;
  const std::size_t regions = cfg.quadrants ? 4 : 1;
  auto per_frame = parallel_map(frames.size(), jobs, [&](std::size_t i) {
    try {
      const Image img = frames[i].resized(w, h);
      std::vector<SpdPoint> out;
      if (cfg.quadrants) {
        for (auto& p : quadrant_descriptors(img, cfg)) out.push_back(std::move(p));
      } else {
        out.push_back(frame_descriptor(img, cfg));
      }
      return out;
    } catch (const std::exception& e) {
      throw ValidationError("frame " + std::to_string(i) + ": " + e.what());
    }
  });
  std::vector<Trajectory<SpdManifold>> out(regions);
  for (std::size_t r = 0; r < regions; ++r) {
    out[r].points.reserve(frames.size());
    for (auto& f : per_frame) out[r].points.push_back(f[r]);
  }
  return out;
}

}  // namespace spdtraj
