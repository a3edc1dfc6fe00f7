#pragma once

// Unit sphere S^2 in R^3 with great-circle geometry. Used to validate the
// trajectory and bundle machinery on a manifold whose geodesics are known in
// closed form. Tangent coordinates are ambient 3-vectors orthogonal to the
// base point.

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace spdtraj {

class SpherePoint {
 public:
  // Requires |v| = 1 within 1e-8; the stored vector is renormalized.
  explicit SpherePoint(const Eigen::Vector3d& v);
  static SpherePoint normalized(const Eigen::Vector3d& v);

  const Eigen::Vector3d& vec() const { return v_; }

 private:
  SpherePoint() = default;
  Eigen::Vector3d v_;
};

// Rotation taking T_p to T_q along the connecting great circle.
class SphereTransport {
 public:
  SphereTransport() : rot_(Eigen::Matrix3d::Identity()) {}
  explicit SphereTransport(const Eigen::Matrix3d& rot) : rot_(rot) {}

  const Eigen::Matrix3d& rotation() const { return rot_; }
  void apply(std::span<const double> in, std::span<double> out) const;
  SphereTransport then(const SphereTransport& next) const {
    return SphereTransport(next.rot_ * rot_);
  }
  SphereTransport inverse() const { return SphereTransport(rot_.transpose()); }

 private:
  Eigen::Matrix3d rot_;
};

class SphereManifold {
 public:
  using Point = SpherePoint;
  using Transport = SphereTransport;

  std::size_t dim() const { return 3; }
  std::size_t tangent_size() const { return 3; }
  const char* name() const { return "sphere"; }

  Point exp(const Point& p, std::span<const double> v) const;
  // Throws DomainError for (near-)antipodal points, where the log is ambiguous.
  void log(const Point& p, const Point& q, std::span<double> out) const;
  double distance(const Point& p, const Point& q) const;
  Point geodesic(const Point& p, const Point& q, double t) const;

  Transport transport(const Point& from, const Point& to) const;
  Transport identity_transport() const { return SphereTransport(); }
  Transport log_and_transport(const Point& p, const Point& q, std::span<double> log_out) const;

  // Unit sectional curvature: R(X, Y) Z = <Y, Z> X - <X, Z> Y.
  void curvature(const Point& p, std::span<const double> x, std::span<const double> y,
                 std::span<const double> z, std::span<double> out) const;
  void integrated_curvature(const Point& p, std::span<const double> v,
                            std::span<const double> w, std::span<const double> weights,
                            std::span<const double> x, std::span<double> out) const;

  bool same_point(const Point& a, const Point& b, double tol = 1e-12) const;
  void validate(const Point&) const {}

  // Two orthonormal vectors spanning T_p.
  std::vector<std::vector<double>> tangent_basis(const Point& p) const;

  // Orthogonal projection onto T_p.
  static Eigen::Vector3d project(const Point& p, const Eigen::Vector3d& v);
};

}  // namespace spdtraj
