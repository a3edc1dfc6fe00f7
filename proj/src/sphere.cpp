#include "spdtraj/sphere.hpp"

#include <algorithm>
#include <cmath>

#include "spdtraj/error.hpp"

namespace spdtraj {
namespace {

Eigen::Map<const Eigen::Vector3d> vec3(std::span<const double> s) {
  if (s.size() != 3) throw ValidationError("sphere: tangent must have 3 coordinates");
  return Eigen::Map<const Eigen::Vector3d>(s.data());
}

Eigen::Map<Eigen::Vector3d> vec3(std::span<double> s) {
  if (s.size() != 3) throw ValidationError("sphere: tangent must have 3 coordinates");
  return Eigen::Map<Eigen::Vector3d>(s.data());
}

constexpr double kAntipodalTol = 1e-9;

}  // namespace

SpherePoint::SpherePoint(const Eigen::Vector3d& v) {
  if (!v.allFinite()) throw ValidationError("sphere: non-finite point");
  if (std::abs(v.norm() - 1.0) > 1e-8) throw ValidationError("sphere: point is not unit length");
  v_ = v.normalized();
}

SpherePoint SpherePoint::normalized(const Eigen::Vector3d& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !v.allFinite()) throw ValidationError("sphere: cannot normalize vector");
  SpherePoint p;
  p.v_ = v / n;
  return p;
}

void SphereTransport::apply(std::span<const double> in, std::span<double> out) const {
  vec3(out) = rot_ * vec3(in);
}

Eigen::Vector3d SphereManifold::project(const Point& p, const Eigen::Vector3d& v) {
  return v - p.vec().dot(v) * p.vec();
}

SpherePoint SphereManifold::exp(const Point& p, std::span<const double> v) const {
  const Eigen::Vector3d t = vec3(v);
  const double th = t.norm();
  if (th < 1e-300) return p;
  return SpherePoint::normalized(std::cos(th) * p.vec() + (std::sin(th) / th) * t);
}

void SphereManifold::log(const Point& p, const Point& q, std::span<double> out) const {
  const double c = std::clamp(p.vec().dot(q.vec()), -1.0, 1.0);
  const Eigen::Vector3d w = q.vec() - c * p.vec();
  const double s = w.norm();
  const double th = std::atan2(s, c);
  if (th > M_PI - kAntipodalTol)
    throw DomainError("sphere log: antipodal points have no unique geodesic");
  auto o = vec3(out);
  if (s < 1e-300) {
    o.setZero();
    return;
  }
  o = (th / s) * w;
}

double SphereManifold::distance(const Point& p, const Point& q) const {
  const double c = p.vec().dot(q.vec());
  const double s = p.vec().cross(q.vec()).norm();
  return std::atan2(s, c);
}

SpherePoint SphereManifold::geodesic(const Point& p, const Point& q, double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("sphere geodesic: t outside [0, 1]");
  Eigen::Vector3d v;
  log(p, q, std::span<double>(v.data(), 3));
  v *= t;
  return exp(p, std::span<const double>(v.data(), 3));
}

SphereTransport SphereManifold::transport(const Point& from, const Point& to) const {
  const Eigen::Vector3d axis = from.vec().cross(to.vec());
  const double s = axis.norm();
  const double c = from.vec().dot(to.vec());
  if (s < 1e-15) {
    if (c < 0.0) throw DomainError("sphere transport: antipodal points");
    return SphereTransport();
  }
  const double th = std::atan2(s, c);
  return SphereTransport(Eigen::AngleAxisd(th, axis / s).toRotationMatrix());
}

SphereTransport SphereManifold::log_and_transport(const Point& p, const Point& q,
                                                  std::span<double> log_out) const {
  log(p, q, log_out);
  return transport(p, q);
}

void SphereManifold::curvature(const Point&, std::span<const double> x,
                               std::span<const double> y, std::span<const double> z,
                               std::span<double> out) const {
  const auto a = vec3(x);
  const auto b = vec3(y);
  const auto c = vec3(z);
  vec3(out) = b.dot(c) * a - a.dot(c) * b;
}

void SphereManifold::integrated_curvature(const Point&, std::span<const double> v,
                                          std::span<const double> w,
                                          std::span<const double> weights,
                                          std::span<const double> x,
                                          std::span<double> out) const {
  const std::size_t count = weights.size();
  if (v.size() != 3 * count || w.size() != 3 * count)
    throw ValidationError("sphere integrated curvature: fiber size mismatch");
  const auto xs = vec3(x);
  // sum_k c_k (<w_k, x> v_k - <v_k, x> w_k) = (sum_k c_k (v_k w_k^T - w_k v_k^T)) x
  Eigen::Matrix3d k = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < count; ++i) {
    const Eigen::Map<const Eigen::Vector3d> a(v.data() + 3 * i);
    const Eigen::Map<const Eigen::Vector3d> b(w.data() + 3 * i);
    k.noalias() += weights[i] * (a * b.transpose() - b * a.transpose());
  }
  vec3(out) = k * xs;
}

bool SphereManifold::same_point(const Point& a, const Point& b, double tol) const {
  return (a.vec() - b.vec()).cwiseAbs().maxCoeff() <= tol;
}

std::vector<std::vector<double>> SphereManifold::tangent_basis(const Point& p) const {
  const Eigen::Vector3d& v = p.vec();
  Eigen::Index k;
  v.cwiseAbs().minCoeff(&k);
  const Eigen::Vector3d a = project(p, Eigen::Vector3d::Unit(k)).normalized();
  const Eigen::Vector3d b = v.cross(a);
  return {{a[0], a[1], a[2]}, {b[0], b[1], b[2]}};
}

}  // namespace spdtraj
