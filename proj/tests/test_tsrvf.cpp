#include <cmath>
#include <random>

#include "doctest.h"
#include "spdtraj/error.hpp"
#include "spdtraj/spd.hpp"
#include "spdtraj/sphere.hpp"
#include "spdtraj/tsrvf.hpp"
#include "support/gen.hpp"

using namespace spdtraj;

namespace {

template <class M>
double sup_distance(const M& m, const Trajectory<M>& a, const Trajectory<M>& b) {
  double s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s = std::max(s, m.distance(a.points[k], b.points[k]));
  return s;
}

// Analytic curve on the sphere sampled at any resolution.
Trajectory<SphereManifold> sphere_curve(std::size_t T) {
  Trajectory<SphereManifold> a;
  for (std::size_t k = 0; k < T; ++k) {
    const double t = static_cast<double>(k) / (T - 1);
    a.points.push_back(SpherePoint::normalized(
        Eigen::Vector3d(std::cos(2 * t), std::sin(2 * t) + 0.3 * t * t, 0.5 + std::sin(3 * t))));
  }
  return a;
}

// q from the analytic velocity, transported along a fine sampling of the
// same curve and read off at the coarse grid.
Fiber analytic_tsrvf(std::size_t T, std::size_t refine) {
  const SphereManifold m;
  const auto fine = sphere_curve((T - 1) * refine + 1);
  const std::size_t F = fine.size();
  Fiber q(T, 3);
  auto chain = m.identity_transport();
  for (std::size_t k = 0; k < F; ++k) {
    if (k % refine == 0) {
      const std::size_t c = k / refine;
      // centered difference velocity at a sample, projected to the tangent
      const double h = 1e-6;
      const double t = static_cast<double>(k) / (F - 1);
      auto at = [](double s) {
        return Eigen::Vector3d(std::cos(2 * s), std::sin(2 * s) + 0.3 * s * s, 0.5 + std::sin(3 * s))
            .normalized();
      };
      const Eigen::Vector3d vel = (at(t + h) - at(t - h)) / (2 * h);
      const Eigen::Vector3d scaled = vel / std::sqrt(vel.norm());
      std::vector<double> in{scaled[0], scaled[1], scaled[2]};
      chain.inverse().apply(in, q.row(c));
    }
    if (k + 1 < F) chain = chain.then(m.transport(fine.points[k], fine.points[k + 1]));
  }
  return q;
}

}  // namespace

TEST_CASE("constant trajectory has zero TSRVF") {
  const SpdManifold m(3);
  std::mt19937_64 rng(40);
  const auto p = gen::random_spd(rng, 3);
  Trajectory<SpdManifold> a{std::vector<SpdPoint>(10, p)};
  const auto r = tsrvf_of(m, a);
  CHECK(l2_norm(r.q) == 0.0);
  const auto back = reconstruct(m, r);
  CHECK(sup_distance(m, a, back) < 1e-12);
}

TEST_CASE("unit-speed geodesic has constant TSRVF") {
  const SpdManifold m(3);
  std::mt19937_64 rng(41);
  const auto p = gen::random_spd(rng, 3);
  auto v = gen::random_spd_tangent(rng, 3);
  double nv = 0;
  for (double x : v) nv += x * x;
  for (auto& x : v) x /= std::sqrt(nv);
  Trajectory<SpdManifold> a;
  const std::size_t T = 50;
  for (std::size_t k = 0; k < T; ++k) {
    auto tv = v;
    for (auto& x : tv) x *= static_cast<double>(k) / (T - 1);
    a.points.push_back(m.exp(p, tv));
  }
  const auto r = tsrvf_of(m, a);
  for (std::size_t k = 0; k < T; ++k)
    for (std::size_t j = 0; j < v.size(); ++j) CHECK(std::abs(r.q.row(k)[j] - v[j]) < 1e-9);
  CHECK(sup_distance(m, reconstruct(m, r), a) < 1e-10);
}

TEST_CASE("reconstruction inverts the TSRVF on the same grid") {
  std::mt19937_64 rng(42);
  const SpdManifold m(3);
  const auto a = gen::random_spd_curve(rng, 3, 100);
  CHECK(sup_distance(m, reconstruct(m, tsrvf_of(m, a)), a) < 1e-9);
  const SphereManifold s;
  const auto b = gen::random_sphere_curve(rng, 100);
  CHECK(sup_distance(s, reconstruct(s, tsrvf_of(s, b)), b) < 1e-9);
}

TEST_CASE("reconstruction from the analytic TSRVF converges at first order") {
  const SphereManifold m;
  double prev = -1;
  for (std::size_t T : {101u, 201u, 401u}) {
    const auto truth = sphere_curve(T);
    const auto rebuilt = reconstruct(m, TsrvfRepr<SphereManifold>{truth.points[0], analytic_tsrvf(T, 8)});
    const double err = sup_distance(m, rebuilt, truth);
    if (T == 201) CHECK(err < 5e-3);
    if (prev > 0) CHECK(prev / err >= 1.8);
    prev = err;
  }
}

TEST_CASE("warping trajectories") {
  std::mt19937_64 rng(43);
  const SpdManifold m(3);
  const auto a = gen::random_spd_curve(rng, 3, 60);
  CHECK(sup_distance(m, warp_trajectory(m, a, WarpFn::identity(60)), a) < 1e-12);
  // t^2 along a sampled geodesic lands on exp_p(t^2 V)
  const auto p = gen::random_spd(rng, 3);
  const auto v = gen::random_spd_tangent(rng, 3);
  const std::size_t T = 101;
  Trajectory<SpdManifold> g;
  for (std::size_t k = 0; k < T; ++k) {
    auto tv = v;
    for (auto& x : tv) x *= static_cast<double>(k) / (T - 1);
    g.points.push_back(m.exp(p, tv));
  }
  const auto sq = WarpFn::from_function(T, [](double t) { return t * t; });
  const auto w = warp_trajectory(m, g, sq);
  for (std::size_t k = 0; k < T; ++k) {
    const double t = static_cast<double>(k) / (T - 1);
    auto tv = v;
    for (auto& x : tv) x *= t * t;
    CHECK(m.distance(w.points[k], m.exp(p, tv)) < 1e-6);
  }
  // starting point unchanged
  CHECK(m.same_point(tsrvf_of(m, w).start, g.points[0], 0.0));
  Trajectory<SpdManifold> c{std::vector<SpdPoint>(T, p)};
  CHECK(sup_distance(m, warp_trajectory(m, c, sq), c) < 1e-12);
}

TEST_CASE("warp action on q preserves the L2 norm") {
  std::mt19937_64 rng(44);
  const SpdManifold m(3);
  for (int rep = 0; rep < 5; ++rep) {
    const auto a = gen::random_spd_curve(rng, 3, 200);
    const auto r = tsrvf_of(m, a);
    const auto g = gen::random_warp(rng, 200);
    CHECK(std::abs(l2_norm(warp_tsrvf(r.q, g)) - l2_norm(r.q)) < 1e-3 * std::max(1.0, l2_norm(r.q)));
    CHECK(l2_dist(warp_tsrvf(r.q, WarpFn::identity(200)), r.q) < 1e-14);
  }
  Fiber zero(50, 9);
  CHECK(l2_norm(warp_tsrvf(zero, gen::exp_warp(50))) == 0.0);
}

TEST_CASE("warping commutes with the TSRVF up to discretization") {
  std::mt19937_64 rng(45);
  const SphereManifold m;
  const auto a = gen::random_sphere_curve(rng, 400);
  const auto g = gen::exp_warp(400, 1.5);
  const auto lhs = tsrvf_of(m, warp_trajectory(m, a, g));
  const auto rhs = warp_tsrvf(tsrvf_of(m, a), g);
  CHECK(l2_dist(lhs.q, rhs.q) < 2e-2 * l2_norm(rhs.q));
}

TEST_CASE("invalid inputs") {
  const SpdManifold m(2);
  Trajectory<SpdManifold> one{{SpdPoint::identity(2)}};
  CHECK_THROWS_AS(tsrvf_of(m, one), ValidationError);
}
