#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "doctest.h"
#include "spdtraj/error.hpp"
#include "spdtraj/features.hpp"
#include "spdtraj/image.hpp"

using namespace spdtraj;

namespace {

Image random_image(std::mt19937_64& rng, std::size_t w, std::size_t h) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Image img(w, h);
  for (auto& p : img.pixels) p = u(rng);
  return img;
}

// Gaussian blob centred at (cx, cy).
Image blob(std::size_t w, std::size_t h, double cx, double cy, double r = 3.0) {
  Image img(w, h);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x)
      img.at(x, y) = std::exp(-(std::pow(x - cx, 2) + std::pow(y - cy, 2)) / (2 * r * r));
  return img;
}

double eps_of(const Matrix& cov) {
  return std::max(kRegularizationRel * cov.trace() / static_cast<double>(cov.rows()),
                  kRegularizationFloor);
}

}  // namespace

TEST_CASE("covariance of a constant map is the regularization") {
  FrameFeatureMap f{4, 3, 3, std::vector<double>(4 * 3 * 3, 0.7)};
  const auto p = covariance_descriptor(f);
  CHECK((p.mat() - kRegularizationFloor * Matrix::Identity(3, 3)).norm() < 1e-20);
}

TEST_CASE("covariance of two pixels by hand") {
  FrameFeatureMap f{2, 1, 2, {0.0, 0.0, 2.0, 0.0}};
  const auto p = covariance_descriptor(f);
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  expected += eps_of(expected) * Matrix::Identity(2, 2);
  CHECK((p.mat() - expected).norm() < 1e-15);
}

TEST_CASE("covariance matches a two-pass oracle and ignores pixel order") {
  std::mt19937_64 rng(90);
  std::normal_distribution<double> g(0.3, 1.0);
  const std::size_t d = 5, n = 40;
  FrameFeatureMap f{8, 5, d, std::vector<double>(n * d)};
  for (auto& v : f.values) v = g(rng);
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) mean[k] += f.at(i)[k] / n;
  Matrix cov = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        cov(a, b) += (f.at(i)[a] - mean[a]) * (f.at(i)[b] - mean[b]) / n;
  cov += eps_of(cov) * Matrix::Identity(d, d);
  const auto p = covariance_descriptor(f);
  CHECK((p.mat() - cov).norm() < 1e-12);

  FrameFeatureMap shuffled = f;
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = (i * 7) % n;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) shuffled.values[i * d + k] = f.at(idx[i])[k];
  CHECK((covariance_descriptor(shuffled).mat() - p.mat()).norm() < 1e-12);

  CHECK_THROWS_AS(covariance_descriptor(FrameFeatureMap{1, 1, 2, {1.0, 2.0}}), ValidationError);
  CHECK_THROWS_AS(covariance_descriptor(FrameFeatureMap{0, 0, 2, {}}), ValidationError);
}

TEST_CASE("intensity features on constant and ramp images") {
  const Image flat(6, 5, 0.4);
  const auto f = intensity_features(flat);
  CHECK(f.d == 7);
  for (std::size_t i = 0; i < f.count(); ++i) {
    CHECK(f.at(i)[2] == 0.4);
    for (int k = 3; k < 7; ++k) CHECK(f.at(i)[k] == 0.0);
  }
  CHECK(f.at(0)[0] == 0.0);
  CHECK(f.at(f.count() - 1)[0] == 1.0);
  CHECK(f.at(f.count() - 1)[1] == 1.0);

  // I = x / (w - 1): unit slope per normalized coordinate, in the interior.
  const std::size_t w = 9, h = 4;
  Image ramp(w, h);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) ramp.at(x, y) = static_cast<double>(x) / (w - 1);
  const auto r = intensity_features(ramp);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 1; x + 1 < w; ++x) {
      const double* v = r.at(y * w + x);
      CHECK(v[3] * (w - 1) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(v[4] == 0.0);
      CHECK(std::abs(v[5]) < 1e-15);
      CHECK(v[6] == 0.0);
    }
  CHECK_THROWS_AS(intensity_features(Image(2, 5)), ValidationError);
}

TEST_CASE("intensity derivatives match a direct stencil") {
  std::mt19937_64 rng(91);
  const Image img = random_image(rng, 11, 7);
  const auto f = intensity_features(img);
  auto px = [&](long x, long y) {
    x = std::clamp(x, 0L, 10L);
    y = std::clamp(y, 0L, 6L);
    return img.pixels[static_cast<std::size_t>(y) * 11 + static_cast<std::size_t>(x)];
  };
  double worst = 0;
  for (long y = 0; y < 7; ++y)
    for (long x = 0; x < 11; ++x) {
      const double* v = f.at(static_cast<std::size_t>(y * 11 + x));
      const double expect[4] = {std::abs(px(x + 1, y) - px(x - 1, y)) / 2,
                                std::abs(px(x, y + 1) - px(x, y - 1)) / 2,
                                std::abs(px(x + 1, y) + px(x - 1, y) - 2 * px(x, y)),
                                std::abs(px(x, y + 1) + px(x, y - 1) - 2 * px(x, y))};
      for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(v[3 + k] - expect[k]));
    }
  CHECK(worst < 1e-12);
}

TEST_CASE("HOG on constant and step-edge images") {
  const auto z = hog_features(Image(32, 24, 0.5));
  CHECK(z.d == 7);
  CHECK(z.width == 3);
  CHECK(z.height == 2);
  for (double v : z.values) CHECK(v == 0.0);

  // Vertical edge: horizontal gradient, orientation 0, all mass in bin 0.
  Image edge(32, 32);
  for (std::size_t y = 0; y < 32; ++y)
    for (std::size_t x = 16; x < 32; ++x) edge.at(x, y) = 1.0;
  const auto f = hog_features(edge, {}, false);
  double bin0 = 0, rest = 0;
  for (std::size_t i = 0; i < f.count(); ++i)
    for (std::size_t k = 0; k < f.d; ++k) (k == 0 ? bin0 : rest) += f.at(i)[k];
  CHECK(bin0 > 0);
  CHECK(rest < 1e-12 * bin0);

  const auto n = hog_features(edge);
  for (std::size_t i = 0; i < n.count(); ++i) {
    double s = 0;
    for (std::size_t k = 0; k < n.d; ++k) s += n.at(i)[k] * n.at(i)[k];
    CHECK((s == 0.0 || std::abs(s - 1.0) < 1e-12));
  }
  CHECK_THROWS_AS(hog_features(Image(15, 40)), ValidationError);
}

TEST_CASE("HOG cell mass equals the gradient magnitude") {
  std::mt19937_64 rng(92);
  const Image img = random_image(rng, 40, 24);
  HogOptions one;
  one.block = 1;
  const auto f = hog_features(img, one, false);
  std::vector<double> mag, ang;
  image_gradients(img, mag, ang);
  double total = 0, mass = 0;
  for (std::size_t y = 0; y < 24; ++y)
    for (std::size_t x = 0; x < 40; ++x) total += mag[y * 40 + x];
  for (double v : f.values) mass += v;
  CHECK(std::abs(total - mass) < 1e-9);
  for (double a : ang) CHECK((a >= 0.0 && a < std::numbers::pi));
}

TEST_CASE("quadrant boxes") {
  const auto b0 = quadrant_boxes(20, 10, 0.0);
  for (const auto& b : b0) {
    CHECK(b.w == 10);
    CHECK(b.h == 5);
  }
  CHECK(b0[1].x0 == 10);
  CHECK(b0[2].y0 == 5);
  CHECK(b0[3].x0 == 10);
  CHECK(b0[3].y0 == 5);
  for (std::size_t w : {10u, 17u, 64u, 101u})
    for (std::size_t h : {10u, 13u, 48u}) {
      const auto b = quadrant_boxes(w, h, 0.1);
      const auto cw = static_cast<std::size_t>(std::ceil(0.6 * w - 1e-9));
      const auto ch = static_cast<std::size_t>(std::ceil(0.6 * h - 1e-9));
      for (const auto& q : b) CHECK(q.w * q.h == cw * ch);
    }
  CHECK_THROWS_AS(quadrant_boxes(1, 5, 0.1), ValidationError);
  CHECK_THROWS_AS(quadrant_boxes(8, 8, 0.7), ValidationError);
}

TEST_CASE("tiled image gives four equal quadrant descriptors") {
  // Period 8 = 20 - 12, so every quadrant crop has the same pixels.
  std::mt19937_64 rng(93);
  const Image tile = random_image(rng, 8, 8);
  Image img(20, 20);
  for (std::size_t y = 0; y < 20; ++y)
    for (std::size_t x = 0; x < 20; ++x) img.at(x, y) = tile.at(x % 8, y % 8);
  FeatureConfig cfg;
  const auto q = quadrant_descriptors(img, cfg);
  for (int k = 1; k < 4; ++k) CHECK((q[k].mat() - q[0].mat()).norm() < 1e-14);
}

TEST_CASE("video trajectories") {
  FeatureConfig cfg;
  const Image a = blob(24, 20, 8, 8);
  const auto same = video_to_trajectory({a, a}, cfg);
  REQUIRE(same.size() == 1);
  CHECK(same[0].size() == 2);
  CHECK((same[0].points[0].mat() - same[0].points[1].mat()).norm() == 0.0);

  std::vector<Image> frames;
  for (int i = 0; i < 6; ++i) frames.push_back(blob(24, 20, 5.0 + 2.5 * i, 10));
  const auto moving = video_to_trajectory(frames, cfg);
  CHECK(moving[0].size() == 6);
  CHECK(moving[0].points[0].dim() == 7);
  CHECK(spd_distance(moving[0].points.front(), moving[0].points.back()) > 0.1);

  cfg.quadrants = true;
  cfg.kind = FeatureKind::Hog;
  cfg.hog.cell = 4;
  frames[3] = frames[3].resized(48, 40);  // resized back to the first frame's size
  const auto quads = video_to_trajectory(frames, cfg, 2);
  CHECK(quads.size() == 4);
  for (const auto& t : quads) {
    CHECK(t.size() == 6);
    CHECK(t.points[0].dim() == 7);
  }

  cfg.quadrants = false;
  cfg.kind = FeatureKind::Intensity;
  CHECK_THROWS_AS(video_to_trajectory({a}, cfg), ValidationError);
}

TEST_CASE("translating a blob changes the descriptor") {
  FeatureConfig cfg;
  const auto p = frame_descriptor(blob(24, 24, 7, 12), cfg);
  const auto q = frame_descriptor(blob(24, 24, 16, 12), cfg);
  CHECK(spd_distance(p, q) > 0.05);
}

TEST_CASE("image IO roundtrip") {
  const auto dir = std::filesystem::temp_directory_path() / "spdtraj_test_features";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  Image img(5, 3);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = i / 14.0;
  write_pgm(img, dir / "b.pgm");
  write_pgm(img, dir / "a.pgm");
  const auto back = read_image(dir / "a.pgm");
  REQUIRE(back.width == 5);
  REQUIRE(back.height == 3);
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    CHECK(std::abs(back.pixels[i] - img.pixels[i]) <= 0.5 / 255 + 1e-12);
  const auto frames = list_frames(dir);
  REQUIRE(frames.size() == 2);
  CHECK(frames[0].filename() == "a.pgm");
  CHECK_THROWS(read_image(dir / "missing.pgm"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("feature kinds") {
  CHECK(parse_feature_kind("hog") == FeatureKind::Hog);
  CHECK(std::string(feature_kind_name(FeatureKind::Intensity)) == "intensity");
  CHECK(feature_dim(FeatureKind::Hog) == 7);
  CHECK_THROWS_AS(parse_feature_kind("sift"), ValidationError);
}
