#pragma once

// Seeded generators for property tests.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "spdtraj/spd.hpp"
#include "spdtraj/sphere.hpp"
#include "spdtraj/tsrvf.hpp"
#include "spdtraj/warp.hpp"

namespace gen {

using spdtraj::Matrix;

inline Matrix random_symmetric(std::mt19937_64& rng, std::size_t n, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = g(rng);
  return a;
}

inline spdtraj::SpdPoint random_spd(std::mt19937_64& rng, std::size_t n, double scale = 0.6) {
  return spdtraj::SpdPoint(spdtraj::SymEig(random_symmetric(rng, n, scale)).exp());
}

inline std::vector<double> flat(const Matrix& m) {
  return std::vector<double>(m.data(), m.data() + m.size());
}

// Random body-coordinate tangent (symmetric), as flat coordinates.
inline std::vector<double> random_spd_tangent(std::mt19937_64& rng, std::size_t n,
                                              double scale = 0.5) {
  return flat(random_symmetric(rng, n, scale));
}

inline Eigen::Vector3d random_unit3(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector3d v(g(rng), g(rng), g(rng));
  return v.normalized();
}

inline spdtraj::SpherePoint random_sphere(std::mt19937_64& rng) {
  return spdtraj::SpherePoint(random_unit3(rng));
}

inline Eigen::Vector3d random_sphere_tangent(std::mt19937_64& rng, const spdtraj::SpherePoint& p,
                                             double scale = 0.5) {
  std::normal_distribution<double> g(0.0, scale);
  return spdtraj::SphereManifold::project(p, Eigen::Vector3d(g(rng), g(rng), g(rng)));
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Smooth SPD curve t -> exp_P(f(t) A + g(t) B) with random P, A, B.
inline std::function<spdtraj::SpdPoint(double)> random_spd_curve_fn(std::mt19937_64& rng,
                                                                    std::size_t n,
                                                                    double scale = 0.6) {
  const spdtraj::SpdManifold m(n);
  const auto p = random_spd(rng, n, 0.5);
  const Matrix a = random_symmetric(rng, n, scale);
  const Matrix b = random_symmetric(rng, n, scale);
  const double w1 = uniform(rng, 1.0, 3.0), w2 = uniform(rng, 0.5, 2.0);
  const double ph = uniform(rng, 0.0, 3.0);
  return [=](double t) {
    const Matrix v = (t + 0.3 * std::sin(w1 * t)) * a + std::sin(w2 * t + ph) * b -
                     std::sin(ph) * b;
    return m.exp(p, flat(v));
  };
}

// The same curve sampled at T equispaced times, or at gamma(t_k).
inline spdtraj::Trajectory<spdtraj::SpdManifold> sample_curve(
    const std::function<spdtraj::SpdPoint(double)>& f, const std::vector<double>& times) {
  spdtraj::Trajectory<spdtraj::SpdManifold> out;
  for (double t : times) out.points.push_back(f(t));
  return out;
}

inline std::vector<double> uniform_times(std::size_t T) {
  std::vector<double> t(T);
  for (std::size_t k = 0; k < T; ++k) t[k] = static_cast<double>(k) / static_cast<double>(T - 1);
  return t;
}

inline spdtraj::Trajectory<spdtraj::SpdManifold> random_spd_curve(std::mt19937_64& rng,
                                                                  std::size_t n, std::size_t T,
                                                                  double scale = 0.6) {
  return sample_curve(random_spd_curve_fn(rng, n, scale), uniform_times(T));
}

inline spdtraj::Trajectory<spdtraj::SphereManifold> random_sphere_curve(std::mt19937_64& rng,
                                                                        std::size_t T,
                                                                        double scale = 0.8) {
  const spdtraj::SphereManifold m;
  const auto p = random_sphere(rng);
  const Eigen::Vector3d a = random_sphere_tangent(rng, p, scale);
  const Eigen::Vector3d b = random_sphere_tangent(rng, p, scale);
  const double w = uniform(rng, 1.0, 3.0);
  spdtraj::Trajectory<spdtraj::SphereManifold> out;
  for (std::size_t k = 0; k < T; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(T - 1);
    const Eigen::Vector3d v = t * a + std::sin(w * t) * std::sin(w * t) * b;
    out.points.push_back(m.exp(p, std::vector<double>{v[0], v[1], v[2]}));
  }
  return out;
}

// Smooth strictly increasing warp: an exponential reparameterization
// followed by t + a sin(k pi t) / (k pi) with |a| < 1.
inline spdtraj::WarpFn random_warp(std::mt19937_64& rng, std::size_t n) {
  const double c = uniform(rng, -1.5, 1.5);
  const double a = uniform(rng, -0.6, 0.6);
  const int k = std::uniform_int_distribution<int>(1, 2)(rng);
  const double kpi = k * M_PI;
  return spdtraj::WarpFn::from_function(n, [&](double t) {
    const double s = std::abs(c) < 1e-9 ? t : std::expm1(c * t) / std::expm1(c);
    return s + a * std::sin(kpi * s) / kpi;
  });
}

inline spdtraj::WarpFn exp_warp(std::size_t n, double c = 2.0) {
  return spdtraj::WarpFn::from_function(
      n, [c](double t) { return (std::exp(c * t) - 1.0) / (std::exp(c) - 1.0); });
}

}  // namespace gen
