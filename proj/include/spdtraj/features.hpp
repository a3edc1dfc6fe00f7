#pragma once

// Frame -> covariance descriptor -> SPD trajectory.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "spdtraj/image.hpp"
#include "spdtraj/spd.hpp"
#include "spdtraj/tsrvf.hpp"

namespace spdtraj {

// Per-location feature vectors, row-major over (x, y): values[(y * width + x) * d + k].
struct FrameFeatureMap {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t d = 0;
  std::vector<double> values;

  std::size_t count() const { return width * height; }
  const double* at(std::size_t i) const { return values.data() + i * d; }
  void validate() const;
};

// Regularized empirical covariance (1/|I|) sum (f - mean)(f - mean)^T.
SpdPoint covariance_descriptor(const FrameFeatureMap& f);

// {x, y, I, |I_x|, |I_y|, |I_xx|, |I_yy|} per pixel. x, y are scaled to
// [0, 1]; derivatives are central differences in pixel units with the
// boundary replicated.
FrameFeatureMap intensity_features(const Image& frame);

struct HogOptions {
  std::size_t cell = 8;   // pixels per cell side
  std::size_t block = 2;  // cells per block side
  std::size_t bins = 7;
};

// Gradient magnitude and unsigned orientation in [0, pi) per pixel, from the
// same central differences as intensity_features.
void image_gradients(const Image& frame, std::vector<double>& magnitude,
                     std::vector<double>& angle);

// One histogram per block position (stride one cell), the sum of the block's
// cell histograms. Bin k is centred at k pi / bins and votes are split
// linearly between the two nearest centres (cyclically). When `normalize` is
// set each block is scaled to unit L2 norm; blocks with mass below 1e-12 stay
// zero.
FrameFeatureMap hog_features(const Image& frame, const HogOptions& opts = {},
                             bool normalize = true);

enum class FeatureKind { Intensity, Hog };

FeatureKind parse_feature_kind(const std::string& s);
const char* feature_kind_name(FeatureKind k);
std::size_t feature_dim(FeatureKind k, const HogOptions& hog = {});

struct FeatureConfig {
  FeatureKind kind = FeatureKind::Intensity;
  HogOptions hog;
  bool quadrants = false;
  double overlap = 0.1;  // quadrant overlap as a fraction of each side
};

SpdPoint frame_descriptor(const Image& frame, const FeatureConfig& cfg);

struct QuadrantBox {
  std::size_t x0, y0, w, h;
};
// Upper-left, upper-right, lower-left, lower-right; each side is
// ceil((0.5 + overlap) * size), clamped to the frame.
std::array<QuadrantBox, 4> quadrant_boxes(std::size_t width, std::size_t height, double overlap);
std::array<SpdPoint, 4> quadrant_descriptors(const Image& frame, const FeatureConfig& cfg);

// One trajectory per region: a single one for whole frames, four in quadrant
// mode. Frames are resized to the first frame's size.
std::vector<Trajectory<SpdManifold>> video_to_trajectory(const std::vector<Image>& frames,
                                                         const FeatureConfig& cfg,
                                                         std::size_t jobs = 1);

}  // namespace spdtraj
