#pragma once

// Riemannian geometry of the n x n symmetric positive-definite matrices,
// viewed as the warped product of the unit-determinant matrices with the real
// line (scalar coordinate x = log(det P) / n, weight psi = sqrt(n)).
//
// Tangent vectors at a point P are kept in *body* coordinates: the symmetric
// matrix A = P^{-1} V obtained by pulling the tangent V back to the identity.
// In these coordinates the Riemannian inner product is the Frobenius inner
// product, so sums and L2 norms of tangent fields are plain array arithmetic.
// The ambient representative V = P A is available on demand.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "spdtraj/matrix_function.hpp"

namespace spdtraj {

class SpdPoint {
 public:
  // Validates symmetry (relative kSymTol) and positive-definiteness (smallest
  // eigenvalue above kPdTol times the largest).
  explicit SpdPoint(const Matrix& mat);

  static SpdPoint identity(std::size_t n) { return SpdPoint(Matrix::Identity(n, n)); }

  const Matrix& mat() const { return mat_; }
  const Matrix& inverse() const { return inv_; }
  std::size_t dim() const { return static_cast<std::size_t>(mat_.rows()); }

  // (1/n) log det
  double logdet_coord() const { return logdet_coord_; }
  double logdet() const { return logdet_coord_ * static_cast<double>(dim()); }
  // mat / det^{1/n}, determinant one.
  Matrix unit_part() const { return mat_ * std::exp(-logdet_coord_); }

 private:
  Matrix mat_;
  Matrix inv_;
  double logdet_coord_ = 0.0;
};

// P + eps I with eps = 1e-6 tr(P)/n, floored at kRegularizationFloor so that a
// zero covariance still yields a valid point.
inline constexpr double kRegularizationRel = 1e-6;
inline constexpr double kRegularizationFloor = 1e-10;
Matrix regularize_covariance(const Matrix& p);

class TangentVec {
 public:
  // `body` = base^{-1} V; must be symmetric.
  static TangentVec from_body(SpdPoint base, const Matrix& body);
  // Ambient V; base^{-1} V must be symmetric.
  static TangentVec from_ambient(SpdPoint base, const Matrix& ambient);
  static TangentVec zero(SpdPoint base);

  const SpdPoint& base() const { return base_; }
  const Matrix& body() const { return body_; }
  // P~ A~
  Matrix ambient() const { return base_.mat() * body_; }

  // Scalar component v = tr(body) / n.
  double scalar_component() const { return body_.trace() / static_cast<double>(base_.dim()); }
  // Traceless part A of the body coordinate.
  Matrix unit_body() const;
  // V = P A on the unit-determinant part P of the base.
  Matrix unit_component() const { return base_.unit_part() * unit_body(); }

  double norm() const { return body_.norm(); }

 private:
  TangentVec(SpdPoint base, Matrix body) : base_(std::move(base)), body_(std::move(body)) {}

  SpdPoint base_;
  Matrix body_;
};

// Parallel transport along the geodesic between two points. Acts on body
// coordinates by congruence with an orthogonal matrix: B -> R^T B R.
class SpdTransport {
 public:
  SpdTransport() = default;
  explicit SpdTransport(Matrix rot) : rot_(std::move(rot)) {}
  static SpdTransport identity(std::size_t n) { return SpdTransport(Matrix::Identity(n, n)); }

  const Matrix& rotation() const { return rot_; }

  Matrix apply(const Matrix& body) const { return rot_.transpose() * body * rot_; }
  void apply(std::span<const double> in, std::span<double> out) const;

  // This transport followed by `next`.
  SpdTransport then(const SpdTransport& next) const { return SpdTransport(rot_ * next.rot_); }
  SpdTransport inverse() const { return SpdTransport(rot_.transpose()); }

 private:
  Matrix rot_;
};

// Manifold interface over flat tangent coordinates (n*n doubles, the body
// matrix). `psi` is the warped-product weight of the scalar direction; the
// stored coordinate is A + (psi / sqrt(n)) v I so that the coordinate
// Frobenius norm equals the Riemannian norm for any psi.
class SpdManifold {
 public:
  using Point = SpdPoint;
  using Transport = SpdTransport;

  explicit SpdManifold(std::size_t n);
  SpdManifold(std::size_t n, double psi);

  std::size_t dim() const { return n_; }
  std::size_t tangent_size() const { return n_ * n_; }
  double psi() const { return psi_; }
  const char* name() const { return "spd"; }

  Point exp(const Point& p, std::span<const double> v) const;
  void log(const Point& p, const Point& q, std::span<double> out) const;
  double distance(const Point& p, const Point& q) const;
  Point geodesic(const Point& p, const Point& q, double t) const;

  Transport transport(const Point& from, const Point& to) const;
  Transport identity_transport() const { return SpdTransport::identity(n_); }
  // log_p(q) and the transport p -> q from a single eigendecomposition.
  Transport log_and_transport(const Point& p, const Point& q, std::span<double> log_out) const;

  // R(X, Y) Z in body coordinates.
  void curvature(const Point& p, std::span<const double> x, std::span<const double> y,
                 std::span<const double> z, std::span<double> out) const;
  // sum_k weights[k] R(v_k, w_k)(x), with v and w given as `count` rows of
  // tangent coordinates.
  void integrated_curvature(const Point& p, std::span<const double> v,
                            std::span<const double> w, std::span<const double> weights,
                            std::span<const double> x, std::span<double> out) const;

  bool same_point(const Point& a, const Point& b, double tol = 1e-12) const;
  void validate(const Point& p) const;

  // Orthonormal basis of the tangent coordinates (symmetric unit matrices).
  std::vector<std::vector<double>> tangent_basis(const Point& p) const;

  // Coordinate <-> full-chart body matrix (identity when psi = sqrt(n)).
  Matrix to_body(std::span<const double> coords) const;
  void from_body(const Matrix& body, std::span<double> out) const;

 private:
  std::size_t n_;
  double psi_;
  double kappa_;  // psi / sqrt(n)
};

// Convenience API on typed tangents (default psi = sqrt(n)).
SpdPoint spd_exp(const SpdPoint& p, const TangentVec& v);
TangentVec spd_log(const SpdPoint& p1, const SpdPoint& p2);
double spd_distance(const SpdPoint& p1, const SpdPoint& p2);
SpdPoint spd_geodesic(const SpdPoint& p1, const SpdPoint& p2, double t);
TangentVec spd_transport(const SpdPoint& p1, const SpdPoint& p2, const TangentVec& v);
TangentVec spd_curvature(const SpdPoint& p, const TangentVec& x, const TangentVec& y,
                         const TangentVec& z);
// <X, Y>_P = tr((P^{-1}X)(P^{-1}Y)^T)
double spd_inner(const TangentVec& x, const TangentVec& y);

// Distance under the structure inherited from the same quotient metric through
// [G] -> G G^T (the classic affine-invariant form): half the Frobenius norm of
// logm(Q1^{-1/2} Q2 Q1^{-1/2}). With this scaling P -> P^2 is an isometry:
// spd_distance(P1, P2) == classic_affine_distance(P1^2, P2^2).
double classic_affine_distance(const SpdPoint& q1, const SpdPoint& q2);

}  // namespace spdtraj
