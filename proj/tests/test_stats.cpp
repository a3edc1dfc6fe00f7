#include <cmath>
#include <random>

#include "doctest.h"
#include "spdtraj/spd.hpp"
#include "spdtraj/sphere.hpp"
#include "spdtraj/stats.hpp"
#include "support/gen.hpp"

using namespace spdtraj;

TEST_CASE("manifold mean of symmetric points") {
  const SphereManifold s;
  std::vector<SpherePoint> pts{SpherePoint::normalized({1, 0, 1}), SpherePoint::normalized({-1, 0, 1}),
                               SpherePoint::normalized({0, 1, 1}), SpherePoint::normalized({0, -1, 1})};
  CHECK((manifold_mean(s, pts).vec() - Eigen::Vector3d(0, 0, 1)).norm() < 1e-10);
  const SpdManifold m(2);
  std::vector<SpdPoint> two{SpdPoint::identity(2), SpdPoint(Matrix::Identity(2, 2) * std::exp(2.0))};
  CHECK((manifold_mean(m, two).mat() - Matrix::Identity(2, 2) * std::exp(1.0)).norm() < 1e-10);
}

TEST_CASE("single and repeated trajectories are their own mean") {
  std::mt19937_64 rng(80);
  const SpdManifold m(2);
  const auto a = gen::random_spd_curve(rng, 2, 50);
  for (std::size_t copies : {1u, 3u}) {
    const auto res = karcher_mean(m, std::vector<Trajectory<SpdManifold>>(copies, a));
    CHECK(res.iterations == 0);
    CHECK(res.converged);
    double sup = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
      sup = std::max(sup, m.distance(res.mean_trajectory.points[k], a.points[k]));
    CHECK(sup < 1e-9);
  }
  CHECK_THROWS_AS(karcher_mean(m, std::vector<Trajectory<SpdManifold>>{}), ValidationError);
}

TEST_CASE("mean of warped copies stays in the orbit") {
  std::mt19937_64 rng(81);
  const SpdManifold m(3);
  const auto a = gen::random_spd_curve(rng, 3, 100);
  std::vector<Trajectory<SpdManifold>> set;
  for (int i = 0; i < 5; ++i) set.push_back(warp_trajectory(m, a, gen::random_warp(rng, 100)));
  const auto res = karcher_mean(m, set);
  for (std::size_t i = 1; i < res.variance_history.size(); ++i)
    CHECK(res.variance_history[i] <= res.variance_history[i - 1] + 1e-6);
  double pre = 0;
  int pairs = 0;
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j, ++pairs)
      pre += dc_geodesic_baseline(m, tsrvf_of(m, set[i]), tsrvf_of(m, set[j])).value;
  pre /= pairs;
  CHECK(quotient_distance_dq(m, res.mean_trajectory, a) < 0.05 * pre);

  const double before = cross_sectional_variance(m, set);
  std::vector<Trajectory<SpdManifold>> aligned;
  for (const auto& x : res.aligned) aligned.push_back(x.trajectory);
  CHECK(cross_sectional_variance(m, aligned) < 0.1 * before);
}

TEST_CASE("mean is invariant to input order") {
  std::mt19937_64 rng(82);
  const SphereManifold s;
  std::vector<Trajectory<SphereManifold>> set;
  for (int i = 0; i < 4; ++i) set.push_back(gen::random_sphere_curve(rng, 60, 0.5));
  auto rev = set;
  std::reverse(rev.begin(), rev.end());
  MeanOptions o;
  const auto a = karcher_mean(s, set, o), b = karcher_mean(s, rev, o);
  double sup = 0;
  for (std::size_t k = 0; k < 60; ++k)
    sup = std::max(sup, s.distance(a.mean_trajectory.points[k], b.mean_trajectory.points[k]));
  CHECK(sup < 1e-6);
}

TEST_CASE("groupwise alignment to a matching template") {
  std::mt19937_64 rng(83);
  const SpdManifold m(2);
  const auto a = gen::random_spd_curve(rng, 2, 60);
  const auto out = groupwise_align(m, std::vector<Trajectory<SpdManifold>>(3, a), tsrvf_of(m, a));
  for (const auto& x : out) CHECK(x.gamma.distance_to_identity() == 0.0);
  CHECK(groupwise_align(m, std::vector<Trajectory<SpdManifold>>{}, tsrvf_of(m, a)).empty());
}

TEST_CASE("parallel alignment is deterministic") {
  std::mt19937_64 rng(84);
  const SpdManifold m(2);
  std::vector<Trajectory<SpdManifold>> set;
  for (int i = 0; i < 6; ++i) set.push_back(gen::random_spd_curve(rng, 2, 50));
  const auto t = tsrvf_of(m, set[0]);
  const auto one = groupwise_align(m, set, t, {}, 1);
  const auto four = groupwise_align(m, set, t, {}, 4);
  for (std::size_t i = 0; i < set.size(); ++i)
    CHECK(warp_l2_distance(one[i].gamma, four[i].gamma) == 0.0);
}
