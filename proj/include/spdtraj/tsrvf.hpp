#pragma once

// Sampled trajectories on a manifold, their transported square-root velocity
// representation, and the action of warping functions on both.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "spdtraj/error.hpp"
#include "spdtraj/fiber.hpp"
#include "spdtraj/kernels.hpp"
#include "spdtraj/warp.hpp"

namespace spdtraj {

// Below this speed the square-root scaling is replaced by zero.
inline constexpr double kVelocityTol = 1e-10;

template <class M>
struct Trajectory {
  std::vector<typename M::Point> points;

  std::size_t size() const { return points.size(); }
  double delta() const { return 1.0 / static_cast<double>(points.size() - 1); }
  double time(std::size_t k) const { return static_cast<double>(k) * delta(); }
};

template <class M>
void validate_trajectory(const M& m, const Trajectory<M>& a) {
  if (a.size() < 2) throw ValidationError("trajectory: need at least 2 samples");
  for (const auto& p : a.points) m.validate(p);
}

// Starting point p and q(tau_k) in T_p, one row per sample.
template <class M>
struct TsrvfRepr {
  typename M::Point start;
  Fiber q;

  std::size_t size() const { return q.samples(); }
};

template <class M>
TsrvfRepr<M> tsrvf_of(const M& m, const Trajectory<M>& a) {
  validate_trajectory(m, a);
  const std::size_t n = a.size();
  const std::size_t d = m.tangent_size();
  const double inv_delta = static_cast<double>(n - 1);
  TsrvfRepr<M> r{a.points.front(), Fiber(n, d)};
  std::vector<double> vel(d), scaled(d);
  auto chain = m.identity_transport();  // alpha_0 -> alpha_k
  for (std::size_t k = 0; k + 1 < n; ++k) {
    auto step = m.log_and_transport(a.points[k], a.points[k + 1], vel);
    const double speed = std::sqrt(kernels::dot(vel.data(), vel.data(), d)) * inv_delta;
    if (speed < kVelocityTol) {
      std::fill(scaled.begin(), scaled.end(), 0.0);
    } else {
      const double s = inv_delta / std::sqrt(speed);
      for (std::size_t j = 0; j < d; ++j) scaled[j] = vel[j] * s;
    }
    chain.inverse().apply(scaled, r.q.row(k));
    chain = chain.then(step);
  }
  std::copy(r.q.row(n - 2).begin(), r.q.row(n - 2).end(), r.q.row(n - 1).begin());
  return r;
}

// Covariant integral: transport q forward along the curve built so far and
// step by exp with velocity q |q|.
template <class M>
Trajectory<M> reconstruct(const M& m, const TsrvfRepr<M>& r) {
  const std::size_t n = r.size();
  if (n < 2) throw ValidationError("tsrvf: need at least 2 samples");
  if (r.q.dim() != m.tangent_size()) throw ValidationError("tsrvf: tangent size mismatch");
  m.validate(r.start);
  const std::size_t d = m.tangent_size();
  const double delta = 1.0 / static_cast<double>(n - 1);
  Trajectory<M> a;
  a.points.reserve(n);
  a.points.push_back(r.start);
  auto chain = m.identity_transport();
  std::vector<double> qt(d);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    chain.apply(r.q.row(k), qt);
    const double s = delta * std::sqrt(kernels::dot(qt.data(), qt.data(), d));
    for (auto& x : qt) x *= s;
    a.points.push_back(m.exp(a.points[k], qt));
    chain = chain.then(m.transport(a.points[k], a.points[k + 1]));
  }
  return a;
}

// alpha(s) for s in [0, 1], geodesic between neighbouring samples.
template <class M>
typename M::Point sample_at(const M& m, const Trajectory<M>& a, double s) {
  const std::size_t n = a.size();
  const double pos = std::clamp(s, 0.0, 1.0) * static_cast<double>(n - 1);
  const auto k = std::min(static_cast<std::size_t>(pos), n - 2);
  const double f = pos - static_cast<double>(k);
  if (f <= 0.0) return a.points[k];
  if (f >= 1.0) return a.points[k + 1];
  return m.geodesic(a.points[k], a.points[k + 1], f);
}

template <class M>
Trajectory<M> resample(const M& m, const Trajectory<M>& a, std::size_t samples) {
  if (samples < 2) throw ValidationError("trajectory: need at least 2 samples");
  Trajectory<M> out;
  out.points.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i)
    out.points.push_back(
        sample_at(m, a, static_cast<double>(i) / static_cast<double>(samples - 1)));
  return out;
}

template <class M>
Trajectory<M> warp_trajectory(const M& m, const Trajectory<M>& a, const WarpFn& gamma) {
  validate_trajectory(m, a);
  const WarpFn g = gamma.size() == a.size() ? gamma : gamma.resample(a.size());
  Trajectory<M> out;
  out.points.reserve(a.size());
  for (double s : g.values()) out.points.push_back(sample_at(m, a, s));
  return out;
}

// (q o gamma) sqrt(gamma'), on q's grid.
Fiber warp_tsrvf(const Fiber& q, const WarpFn& gamma);

template <class M>
TsrvfRepr<M> warp_tsrvf(const TsrvfRepr<M>& r, const WarpFn& gamma) {
  return {r.start, warp_tsrvf(r.q, gamma)};
}

}  // namespace spdtraj
