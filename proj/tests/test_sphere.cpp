#include <cmath>
#include <random>

#include "doctest.h"
#include "spdtraj/error.hpp"
#include "spdtraj/sphere.hpp"
#include "support/gen.hpp"

using namespace spdtraj;

namespace {
std::vector<double> v3(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }
Eigen::Vector3d e3(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }
}  // namespace

TEST_CASE("great-circle exp and log") {
  std::mt19937_64 rng(20);
  const SphereManifold m;
  for (int rep = 0; rep < 20; ++rep) {
    const auto p = gen::random_sphere(rng), q = gen::random_sphere(rng);
    std::vector<double> v(3);
    m.log(p, q, v);
    CHECK(std::abs(e3(v).dot(p.vec())) < 1e-12);
    CHECK((m.exp(p, v).vec() - q.vec()).norm() < 1e-10);
    CHECK(e3(v).norm() == doctest::Approx(std::acos(std::clamp(p.vec().dot(q.vec()), -1.0, 1.0))));
    CHECK(m.distance(p, q) == doctest::Approx(m.distance(q, p)));
  }
  const SpherePoint north(Eigen::Vector3d(0, 0, 1));
  const SpherePoint east(Eigen::Vector3d(1, 0, 0));
  CHECK(m.distance(north, east) == doctest::Approx(M_PI / 2));
  std::vector<double> out(3);
  CHECK_THROWS_AS(m.log(north, SpherePoint(Eigen::Vector3d(0, 0, -1)), out), DomainError);
}

TEST_CASE("transport keeps tangency and inner products") {
  std::mt19937_64 rng(21);
  const SphereManifold m;
  for (int rep = 0; rep < 20; ++rep) {
    const auto p = gen::random_sphere(rng), q = gen::random_sphere(rng);
    const auto x = gen::random_sphere_tangent(rng, p), y = gen::random_sphere_tangent(rng, p);
    const auto t = m.transport(p, q);
    std::vector<double> tx(3), ty(3);
    t.apply(v3(x), tx);
    t.apply(v3(y), ty);
    CHECK(std::abs(e3(tx).dot(q.vec())) < 1e-12);
    CHECK(e3(tx).dot(e3(ty)) == doctest::Approx(x.dot(y)));
    std::vector<double> v(3), w(3), tv(3);
    m.log(p, q, v);
    m.log(q, p, w);
    t.apply(v, tv);
    CHECK((e3(tv) + e3(w)).norm() < 1e-10);
  }
}

TEST_CASE("unit sectional curvature and geodesic deviation") {
  std::mt19937_64 rng(22);
  const SphereManifold m;
  const auto p = gen::random_sphere(rng);
  const auto x = gen::random_sphere_tangent(rng, p, 1.0), y = gen::random_sphere_tangent(rng, p, 1.0);
  std::vector<double> r(3), r2(3);
  m.curvature(p, v3(x), v3(y), v3(y), r);
  const double k = e3(r).dot(x);
  CHECK(k == doctest::Approx(x.squaredNorm() * y.squaredNorm() - std::pow(x.dot(y), 2)));
  m.curvature(p, v3(y), v3(x), v3(y), r2);
  CHECK((e3(r) + e3(r2)).norm() < 1e-15);
  const double t = 0.02;
  const double d = m.distance(m.exp(p, v3(t * x)), m.exp(p, v3(t * y)));
  const double est = (t * t * (x - y).squaredNorm() - d * d) * 3.0 / std::pow(t, 4);
  CHECK(est == doctest::Approx(k).epsilon(0.05));
}

TEST_CASE("validation of points") {
  CHECK_THROWS_AS(SpherePoint(Eigen::Vector3d(1, 1, 0)), ValidationError);
  CHECK(SpherePoint::normalized(Eigen::Vector3d(2, 0, 0)).vec().x() == doctest::Approx(1.0));
}
