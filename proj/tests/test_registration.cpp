#include <cmath>
#include <random>

#include "doctest.h"
#include "spdtraj/registration.hpp"
#include "spdtraj/spd.hpp"
#include "spdtraj/sphere.hpp"
#include "support/gen.hpp"

using namespace spdtraj;

TEST_CASE("identical trajectories register to the identity") {
  std::mt19937_64 rng(70);
  const SpdManifold m(3);
  const auto a = gen::random_spd_curve(rng, 3, 100);
  for (bool full : {false, true}) {
    RegistrationOptions o;
    o.full = full;
    const auto r = pairwise_register(m, a, a, o);
    CHECK(r.d_q < 1e-10);
    double sup = 0;
    for (std::size_t i = 0; i < r.gamma_star.size(); ++i)
      sup = std::max(sup, std::abs(r.gamma_star.values()[i] - r.gamma_star.grid(i)));
    CHECK(sup < 1.0 / 100);
    CHECK(r.approximate == !full);
  }
}

TEST_CASE("warped copy is recovered") {
  std::mt19937_64 rng(71);
  const SpdManifold m(3);
  const auto a = gen::random_spd_curve(rng, 3, 200);
  const auto g0 = gen::exp_warp(200, 2.0);
  const auto b = warp_trajectory(m, a, g0);
  const auto r = pairwise_register(m, a, b);
  CHECK(r.d_q < 0.05 * r.d_c_before);
  CHECK(g0.compose(r.gamma_star.resample(200)).distance_to_identity() < 0.03);
}

TEST_CASE("aligned distance never exceeds the unaligned one") {
  std::mt19937_64 rng(72);
  const SphereManifold m;
  for (int rep = 0; rep < 5; ++rep) {
    const auto a = gen::random_sphere_curve(rng, 80), b = gen::random_sphere_curve(rng, 80);
    for (bool full : {false, true}) {
      RegistrationOptions o;
      o.full = full;
      const auto r = pairwise_register(m, a, b, o);
      CHECK(r.d_q <= r.d_c_before + 1e-6);
      for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[0] + 1e-6);
    }
  }
}

TEST_CASE("zero TSRVFs leave only the base distance") {
  std::mt19937_64 rng(73);
  const SpdManifold m(2);
  const auto p1 = gen::random_spd(rng, 2), p2 = gen::random_spd(rng, 2);
  Trajectory<SpdManifold> a{std::vector<SpdPoint>(20, p1)}, b{std::vector<SpdPoint>(20, p2)};
  CHECK(quotient_distance_dq(m, a, b) == doctest::Approx(m.distance(p1, p2)).epsilon(1e-10));
  RegistrationOptions o;
  o.full = true;
  CHECK(quotient_distance_dq(m, a, b, o) == doctest::Approx(m.distance(p1, p2)).epsilon(1e-6));
}

TEST_CASE("fast and full coincide for a shared starting point") {
  std::mt19937_64 rng(74);
  const SpdManifold m(3);
  auto r1 = tsrvf_of(m, gen::random_spd_curve(rng, 3, 100));
  auto r2 = tsrvf_of(m, gen::random_spd_curve(rng, 3, 100));
  r2.start = r1.start;
  RegistrationOptions fast, full;
  full.full = true;
  fast.fast_repeats = fast.itermax - 1;
  const auto a = register_repr(m, r1, r2, fast).result;
  const auto b = register_repr(m, r1, r2, full).result;
  CHECK(a.d_q == doctest::Approx(b.d_q).epsilon(1e-9));
  CHECK(warp_l2_distance(a.gamma_star, b.gamma_star) < 1e-9);
}

TEST_CASE("fast approximation tracks the full method") {
  std::mt19937_64 rng(75);
  const SpdManifold m(3);
  for (int rep = 0; rep < 3; ++rep) {
    const auto a = gen::random_spd_curve(rng, 3, 60), b = gen::random_spd_curve(rng, 3, 60);
    RegistrationOptions full;
    full.full = true;
    const double f = quotient_distance_dq(m, a, b);
    const double s = quotient_distance_dq(m, a, b, full);
    CHECK(std::abs(f - s) <= 0.1 * s);
  }
}

TEST_CASE("co-warping leaves d_c unchanged") {
  std::mt19937_64 rng(76);
  const SpdManifold m(3);
  for (int rep = 0; rep < 3; ++rep) {
    const auto a = gen::random_spd_curve(rng, 3, 200), b = gen::random_spd_curve(rng, 3, 200);
    const auto g = gen::random_warp(rng, 200);
    const auto ra = tsrvf_of(m, a), rb = tsrvf_of(m, b);
    const double before = dc_geodesic_baseline(m, ra, rb).value;
    const double after = dc_geodesic_baseline(m, warp_tsrvf(ra, g), warp_tsrvf(rb, g)).value;
    CHECK(std::abs(before - after) < 1e-3);
  }
}

TEST_CASE("pointwise formulation is not symmetric") {
  std::mt19937_64 rng(77);
  const SpdManifold m(2);
  bool found = false;
  for (int rep = 0; rep < 20 && !found; ++rep) {
    const auto a = gen::random_spd_curve(rng, 2, 40), b = gen::random_spd_curve(rng, 2, 40);
    const double ab = naive_warped_distance(m, a, b).value;
    const double ba = naive_warped_distance(m, b, a).value;
    found = std::abs(ab - ba) > 0.01;
  }
  CHECK(found);
}

TEST_CASE("mismatched inputs are rejected") {
  std::mt19937_64 rng(78);
  const SpdManifold m(2);
  const auto a = gen::random_spd_curve(rng, 2, 20), b = gen::random_spd_curve(rng, 2, 30);
  CHECK_THROWS_AS(pairwise_register(m, a, b), ValidationError);
}
