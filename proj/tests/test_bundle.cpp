#include <cmath>
#include <random>

#include "doctest.h"
#include "spdtraj/bundle.hpp"
#include "spdtraj/spd.hpp"
#include "spdtraj/sphere.hpp"
#include "support/gen.hpp"

using namespace spdtraj;

namespace {

template <class M>
TsrvfRepr<M> repr(const M& m, const Trajectory<M>& a) {
  return tsrvf_of(m, a);
}

}  // namespace

TEST_CASE("zero direction gives a constant path") {
  std::mt19937_64 rng(60);
  const SphereManifold m;
  const auto r = tsrvf_of(m, gen::random_sphere_curve(rng, 30));
  const BundleTangent<SphereManifold> dir{Vec(3, 0.0), Fiber(30, 3)};
  const auto path = bundle_exp(m, r, dir, 10);
  for (const auto& x : path.x) CHECK(m.distance(x, r.start) == 0.0);
  CHECK(l2_dist(path.fiber(10), r.q) == 0.0);
}

TEST_CASE("zero fiber follows the manifold geodesic") {
  std::mt19937_64 rng(61);
  const SpdManifold m(3);
  const auto p = gen::random_spd(rng, 3);
  const auto u = gen::random_spd_tangent(rng, 3);
  const TsrvfRepr<SpdManifold> r{p, Fiber(20, 9)};
  const auto path = bundle_exp(m, r, BundleTangent<SpdManifold>{u, Fiber(20, 9)}, 16);
  for (std::size_t i = 0; i <= 16; ++i) {
    auto su = u;
    for (auto& x : su) x *= i / 16.0;
    CHECK(m.distance(path.x[i], m.exp(p, su)) < 1e-9);
    CHECK(l2_norm(path.fiber(i)) == 0.0);
  }
}

TEST_CASE("exponential self-converges on the sphere") {
  std::mt19937_64 rng(62);
  const SphereManifold m;
  const auto r = tsrvf_of(m, gen::random_sphere_curve(rng, 50));
  const auto u = gen::random_sphere_tangent(rng, r.start, 0.6);
  BundleTangent<SphereManifold> dir{Vec{u[0], u[1], u[2]}, Fiber(50, 3)};
  std::mt19937_64 rng2(63);
  for (std::size_t k = 0; k < 50; ++k) {
    const auto w = gen::random_sphere_tangent(rng2, r.start, 0.3);
    for (int j = 0; j < 3; ++j) dir.w.row(k)[j] = w[j];
  }
  const auto a = bundle_exp(m, r, dir, 32).end();
  const auto b = bundle_exp(m, r, dir, 64).end();
  const auto c = bundle_exp(m, r, dir, 128).end();
  // First-order scheme: the gap halves with each doubling.
  CHECK(m.distance(b, c) < 5e-4);
  CHECK(m.distance(a, b) / m.distance(b, c) > 1.8);
}

TEST_CASE("fiber is covariantly linear along the path") {
  std::mt19937_64 rng(64);
  const SpdManifold m(3);
  const auto r1 = tsrvf_of(m, gen::random_spd_curve(rng, 3, 40));
  const auto r2 = tsrvf_of(m, gen::random_spd_curve(rng, 3, 40));
  const auto shot = bundle_shoot(m, r1, r2);
  const auto& path = shot.path;
  for (std::size_t i = 0; i <= path.steps; i += 5) {
    Fiber expect = r1.q;
    expect.add_scaled(static_cast<double>(i) / path.steps, shot.dir.w);
    const Fiber back = transport_fiber(path.chain[i].inverse(), path.fiber(i));
    CHECK(l2_dist(back, expect) < 1e-10);
  }
  CHECK(geodesic_residuals(m, path).fiber < 1e-8);
}

TEST_CASE("shooting reaches the target") {
  std::mt19937_64 rng(65);
  const SphereManifold s;
  int hits = 0;
  for (int rep = 0; rep < 5; ++rep) {
    const auto a = tsrvf_of(s, gen::random_sphere_curve(rng, 50));
    const auto b = tsrvf_of(s, gen::random_sphere_curve(rng, 50));
    const auto shot = bundle_shoot(s, a, b);
    hits += shot.converged;
    CHECK(shot.converged == (shot.discrepancy() < 1e-4));
  }
  const SpdManifold m(3);
  for (int rep = 0; rep < 5; ++rep) {
    const auto a = tsrvf_of(m, gen::random_spd_curve(rng, 3, 50));
    const auto b = tsrvf_of(m, gen::random_spd_curve(rng, 3, 50));
    const auto shot = bundle_shoot(m, a, b);
    hits += shot.converged;
    CHECK(shot.converged == (shot.discrepancy() < 1e-4));
    if (shot.converged) {
      // The reported direction really lands on the target.
      const auto again = bundle_exp(m, a, shot.dir, shot.path.steps);
      CHECK(m.distance(again.end(), b.start) < 1e-4);
    }
  }
  CHECK(hits >= 9);
}

TEST_CASE("curvature operator reproduces the bundle exponential") {
  std::mt19937_64 rng(69);
  const SpdManifold m(3);
  const auto a = tsrvf_of(m, gen::random_spd_curve(rng, 3, 40));
  const auto b = tsrvf_of(m, gen::random_spd_curve(rng, 3, 40));
  BundleTangent<SpdManifold> dir{Vec(9), Fiber()};
  const auto back = m.log_and_transport(a.start, b.start, dir.u).inverse();
  dir.w = transport_fiber(back, b.q) - a.q;
  const auto cp = detail::make_coupling(m, a.start, a.size());
  CHECK(cp.generators.size() == 3);
  const auto op = cp.operator_of(m, a.start, a.q, dir.w);
  // The operator lies in the span of the generators.
  CHECK((cp.lift(cp.project(op)) - op).norm() < 1e-12 * std::max(1.0, op.norm()));
  const auto full = bundle_exp(m, a, dir, 20);
  const auto reduced = detail::exp_with_operator(m, cp, a.start, dir.u, op, 20);
  for (std::size_t i = 0; i <= 20; ++i) CHECK(m.distance(full.x[i], reduced.x[i]) < 1e-10);

  const SphereManifold s;
  const auto sa = tsrvf_of(s, gen::random_sphere_curve(rng, 40));
  CHECK(detail::make_coupling(s, sa.start, sa.size()).generators.size() == 1);
}

TEST_CASE("same starting point is solved at iteration zero") {
  std::mt19937_64 rng(66);
  const SpdManifold m(3);
  auto a = tsrvf_of(m, gen::random_spd_curve(rng, 3, 50));
  auto b = tsrvf_of(m, gen::random_spd_curve(rng, 3, 50));
  b.start = a.start;
  const auto shot = bundle_shoot(m, a, b);
  CHECK(shot.iterations == 0);
  CHECK(shot.converged);
  CHECK(l2_dist(shot.dir.w, b.q - a.q) < 1e-12);
  const auto dc = bundle_distance_dc(m, a, b);
  CHECK(dc.value == doctest::Approx(l2_dist(a.q, b.q)).epsilon(1e-10));
  CHECK(bundle_distance_dc(m, a, a).value < 1e-10);
}

TEST_CASE("d_c is symmetric and dominates the base distance") {
  std::mt19937_64 rng(67);
  const SphereManifold m;
  for (int rep = 0; rep < 3; ++rep) {
    const auto a = tsrvf_of(m, gen::random_sphere_curve(rng, 50));
    const auto b = tsrvf_of(m, gen::random_sphere_curve(rng, 50));
    const double ab = bundle_distance_dc(m, a, b).value;
    const double ba = bundle_distance_dc(m, b, a).value;
    CHECK(std::abs(ab - ba) < 1e-3);
    CHECK(ab >= m.distance(a.start, b.start) - 1e-12);
  }
}

TEST_CASE("base residual halves as the step count doubles") {
  std::mt19937_64 rng(68);
  const SphereManifold m;
  const auto a = tsrvf_of(m, gen::random_sphere_curve(rng, 50));
  const auto b = tsrvf_of(m, gen::random_sphere_curve(rng, 50));
  ShootOptions o;
  o.refine = false;
  double prev = -1;
  for (std::size_t S : {20u, 40u, 80u}) {
    o.steps = S;
    const auto shot = bundle_shoot(m, a, b, o);
    const double res = geodesic_residuals(m, shot.path).base;
    if (prev > 0) CHECK(prev / res >= 1.8);
    prev = res;
  }
}

TEST_CASE("energy is nearly constant along the path") {
  std::mt19937_64 rng(69);
  const SpdManifold m(3);
  const auto a = tsrvf_of(m, gen::random_spd_curve(rng, 3, 40));
  const auto b = tsrvf_of(m, gen::random_spd_curve(rng, 3, 40));
  ShootOptions o;
  o.steps = 80;
  const auto shot = bundle_shoot(m, a, b, o);
  const double w2 = l2_norm_sq(shot.dir.w);
  const double e0 = vec_norm(shot.path.xs.front()) * vec_norm(shot.path.xs.front()) + w2;
  for (const auto& xs : shot.path.xs)
    CHECK(std::abs(vec_norm(xs) * vec_norm(xs) + w2 - e0) < 0.05 * e0);
}
