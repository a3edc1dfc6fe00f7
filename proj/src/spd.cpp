#include "spdtraj/spd.hpp"

#include <algorithm>
#include <memory>
#include <vector>
#include <sstream>

#include "spdtraj/error.hpp"

namespace spdtraj {
namespace {

using ConstMap = Eigen::Map<const Matrix>;
using MutMap = Eigen::Map<Matrix>;

ConstMap as_matrix(std::span<const double> s, std::size_t n) {
  if (s.size() != n * n) throw ValidationError("spd: tangent coordinate has wrong size");
  return ConstMap(s.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

MutMap as_matrix(std::span<double> s, std::size_t n) {
  if (s.size() != n * n) throw ValidationError("spd: tangent coordinate has wrong size");
  return MutMap(s.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

void require_same_dim(const SpdPoint& a, const SpdPoint& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << "spd: dimension mismatch (" << a.dim() << " vs " << b.dim() << ")";
    throw ValidationError(os.str());
  }
}

// SVD of A = P1^{-1} P2. Since A A^T = P1^{-1} P2^2 P1^{-1}, the body
// coordinate of log_{P1}(P2) is U log(S) U^T and the transport rotation
// (A A^T)^{-1/2} A is U V^T; working with A avoids squaring its condition
// number.
struct Relative {
  Matrix u;
  Vector sigma;
  Matrix v;

  Matrix log_body() const {
    return symmetrize(u * sigma.array().log().matrix().asDiagonal() * u.transpose());
  }
  Matrix rotation() const { return u * v.transpose(); }
};

Relative relative(const SpdPoint& p1, const SpdPoint& p2) {
  const Eigen::JacobiSVD<Matrix> svd(p1.inverse() * p2.mat(),
                                     Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  if (!(s.minCoeff() > 0.0)) {
    std::ostringstream os;
    os << "spd: relative position has singular value " << s.minCoeff();
    throw NumericalRangeError(os.str());
  }
  return {svd.matrixU(), s, svd.matrixV()};
}

const SpdManifold& default_manifold(std::size_t n) {
  thread_local std::vector<std::unique_ptr<SpdManifold>> cache;
  if (cache.size() <= n) cache.resize(n + 1);
  if (!cache[n]) cache[n] = std::make_unique<SpdManifold>(n);
  return *cache[n];
}

}  // namespace

SpdPoint::SpdPoint(const Matrix& mat) {
  if (mat.rows() == 0 || mat.rows() != mat.cols())
    throw ValidationError("spd: matrix must be square and non-empty");
  if (!mat.allFinite()) throw ValidationError("spd: matrix has non-finite entries");
  if (!is_symmetric(mat)) throw ValidationError("spd: matrix is not symmetric");
  mat_ = symmetrize(mat);
  const SymEig eig(mat_);
  eig.require_positive("spd point");
  inv_ = eig.inverse();
  logdet_coord_ = eig.values().array().log().sum() / static_cast<double>(mat_.rows());
}

Matrix regularize_covariance(const Matrix& p) {
  const double n = static_cast<double>(p.rows());
  const double eps = std::max(kRegularizationRel * p.trace() / n, kRegularizationFloor);
  return symmetrize(p) + eps * Matrix::Identity(p.rows(), p.cols());
}

TangentVec TangentVec::from_body(SpdPoint base, const Matrix& body) {
  if (body.rows() != static_cast<Eigen::Index>(base.dim()) || body.cols() != body.rows())
    throw ValidationError("tangent: body matrix has wrong shape");
  if (!is_symmetric(body)) throw ValidationError("tangent: body matrix is not symmetric");
  Matrix sym = symmetrize(body);
  return TangentVec(std::move(base), std::move(sym));
}

TangentVec TangentVec::from_ambient(SpdPoint base, const Matrix& ambient) {
  if (ambient.rows() != static_cast<Eigen::Index>(base.dim()) || ambient.cols() != ambient.rows())
    throw ValidationError("tangent: ambient matrix has wrong shape");
  const Matrix body = base.inverse() * ambient;
  if (!is_symmetric(body, 1e-7))
    throw ValidationError("tangent: P^{-1} V is not symmetric; not a tangent at this base");
  return from_body(std::move(base), symmetrize(body));
}

TangentVec TangentVec::zero(SpdPoint base) {
  const auto n = static_cast<Eigen::Index>(base.dim());
  return TangentVec(std::move(base), Matrix::Zero(n, n));
}

Matrix TangentVec::unit_body() const {
  const auto n = static_cast<Eigen::Index>(base_.dim());
  return body_ - scalar_component() * Matrix::Identity(n, n);
}

void SpdTransport::apply(std::span<const double> in, std::span<double> out) const {
  const auto n = static_cast<std::size_t>(rot_.rows());
  as_matrix(out, n) = rot_.transpose() * as_matrix(in, n) * rot_;
}

SpdManifold::SpdManifold(std::size_t n) : SpdManifold(n, std::sqrt(static_cast<double>(n))) {}

SpdManifold::SpdManifold(std::size_t n, double psi)
    : n_(n), psi_(psi), kappa_(psi / std::sqrt(static_cast<double>(n))) {
  if (n == 0) throw ValidationError("spd manifold: dimension must be positive");
  if (!(psi > 0.0)) throw ValidationError("spd manifold: psi must be positive");
}

void SpdManifold::validate(const Point& p) const {
  if (p.dim() != n_) {
    std::ostringstream os;
    os << "spd: point of dimension " << p.dim() << " on manifold of dimension " << n_;
    throw ValidationError(os.str());
  }
}

Matrix SpdManifold::to_body(std::span<const double> coords) const {
  Matrix c = as_matrix(coords, n_);
  if (kappa_ != 1.0) {
    const double v = c.trace() / (kappa_ * static_cast<double>(n_));
    c.diagonal().array() += (1.0 - kappa_) * v;
  }
  return c;
}

void SpdManifold::from_body(const Matrix& body, std::span<double> out) const {
  auto o = as_matrix(out, n_);
  o = body;
  if (kappa_ != 1.0) {
    const double v = body.trace() / static_cast<double>(n_);
    o.diagonal().array() += (kappa_ - 1.0) * v;
  }
}

SpdPoint SpdManifold::exp(const Point& p, std::span<const double> v) const {
  validate(p);
  const Matrix body = to_body(v);
  if (!is_symmetric(body)) throw ValidationError("spd exp: tangent is not symmetric");
  // sqrt(P e^{2A} P) is the symmetric polar factor of B = P e^A.
  const Matrix b = p.mat() * SymEig(symmetrize(body)).exp();
  const Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullU);
  return SpdPoint(symmetrize(svd.matrixU() * svd.singularValues().asDiagonal() *
                             svd.matrixU().transpose()));
}

void SpdManifold::log(const Point& p, const Point& q, std::span<double> out) const {
  validate(p);
  validate(q);
  from_body(relative(p, q).log_body(), out);
}

double SpdManifold::distance(const Point& p, const Point& q) const {
  validate(p);
  validate(q);
  const Vector a = relative(p, q).sigma.array().log().matrix();
  const double v = a.mean();
  const double traceless = (a.array() - v).square().sum();
  return std::sqrt(traceless + kappa_ * kappa_ * static_cast<double>(n_) * v * v);
}

SpdPoint SpdManifold::geodesic(const Point& p, const Point& q, double t) const {
  if (!(t >= 0.0 && t <= 1.0)) {
    std::ostringstream os;
    os << "spd geodesic: t = " << t << " outside [0, 1]";
    throw DomainError(os.str());
  }
  if (t == 0.0) return p;
  if (t == 1.0) return q;
  Matrix c(n_, n_);
  log(p, q, std::span<double>(c.data(), c.size()));
  c *= t;
  return exp(p, std::span<const double>(c.data(), c.size()));
}

SpdTransport SpdManifold::transport(const Point& from, const Point& to) const {
  validate(from);
  validate(to);
  return SpdTransport(relative(from, to).rotation());
}

SpdTransport SpdManifold::log_and_transport(const Point& p, const Point& q,
                                            std::span<double> log_out) const {
  validate(p);
  validate(q);
  const Relative rel = relative(p, q);
  from_body(rel.log_body(), log_out);
  return SpdTransport(rel.rotation());
}

void SpdManifold::curvature(const Point& p, std::span<const double> x,
                            std::span<const double> y, std::span<const double> z,
                            std::span<double> out) const {
  validate(p);
  const auto a = as_matrix(x, n_);
  const auto b = as_matrix(y, n_);
  const auto c = as_matrix(z, n_);
  const Matrix ab = a * b - b * a;
  as_matrix(out, n_) = -(ab * c - c * ab);
}

void SpdManifold::integrated_curvature(const Point& p, std::span<const double> v,
                                       std::span<const double> w,
                                       std::span<const double> weights,
                                       std::span<const double> x, std::span<double> out) const {
  validate(p);
  const std::size_t d = tangent_size();
  const std::size_t count = weights.size();
  if (v.size() != count * d || w.size() != count * d)
    throw ValidationError("spd integrated curvature: fiber size mismatch");
  // R(V, W) X = -[[V, W], X] is linear in [V, W]; accumulate the bracket first.
  Matrix k = Matrix::Zero(n_, n_);
  for (std::size_t i = 0; i < count; ++i) {
    if (weights[i] == 0.0) continue;
    const auto a = as_matrix(v.subspan(i * d, d), n_);
    const auto b = as_matrix(w.subspan(i * d, d), n_);
    k.noalias() += weights[i] * (a * b - b * a);
  }
  const auto xm = as_matrix(x, n_);
  as_matrix(out, n_) = -(k * xm - xm * k);
}

bool SpdManifold::same_point(const Point& a, const Point& b, double tol) const {
  const double scale = std::max(1.0, a.mat().cwiseAbs().maxCoeff());
  return (a.mat() - b.mat()).cwiseAbs().maxCoeff() <= tol * scale;
}

std::vector<std::vector<double>> SpdManifold::tangent_basis(const Point& p) const {
  validate(p);
  std::vector<std::vector<double>> basis;
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i; j < n_; ++j) {
      std::vector<double> e(n_ * n_, 0.0);
      if (i == j) {
        e[i * n_ + i] = 1.0;
      } else {
        e[i * n_ + j] = r;
        e[j * n_ + i] = r;
      }
      basis.push_back(std::move(e));
    }
  }
  return basis;
}

SpdPoint spd_exp(const SpdPoint& p, const TangentVec& v) {
  if (!default_manifold(p.dim()).same_point(p, v.base(), kNumTol))
    throw ValidationError("spd_exp: tangent is not based at the given point");
  const Matrix& b = v.body();
  return default_manifold(p.dim()).exp(p, std::span<const double>(b.data(), b.size()));
}

TangentVec spd_log(const SpdPoint& p1, const SpdPoint& p2) {
  require_same_dim(p1, p2);
  const auto n = static_cast<Eigen::Index>(p1.dim());
  Matrix body(n, n);
  default_manifold(p1.dim()).log(p1, p2, std::span<double>(body.data(), body.size()));
  return TangentVec::from_body(p1, body);
}

double spd_distance(const SpdPoint& p1, const SpdPoint& p2) {
  require_same_dim(p1, p2);
  return default_manifold(p1.dim()).distance(p1, p2);
}

SpdPoint spd_geodesic(const SpdPoint& p1, const SpdPoint& p2, double t) {
  require_same_dim(p1, p2);
  return default_manifold(p1.dim()).geodesic(p1, p2, t);
}

TangentVec spd_transport(const SpdPoint& p1, const SpdPoint& p2, const TangentVec& v) {
  require_same_dim(p1, p2);
  const auto& m = default_manifold(p1.dim());
  if (!m.same_point(p1, v.base(), kNumTol))
    throw ValidationError("spd_transport: tangent is not based at the source point");
  return TangentVec::from_body(p2, m.transport(p1, p2).apply(v.body()));
}

TangentVec spd_curvature(const SpdPoint& p, const TangentVec& x, const TangentVec& y,
                         const TangentVec& z) {
  const auto& m = default_manifold(p.dim());
  for (const TangentVec* t : {&x, &y, &z})
    if (!m.same_point(p, t->base(), kNumTol))
      throw ValidationError("spd_curvature: tangent is not based at the given point");
  const auto n = static_cast<Eigen::Index>(p.dim());
  Matrix out(n, n);
  auto span_of = [](const Matrix& mm) { return std::span<const double>(mm.data(), mm.size()); };
  m.curvature(p, span_of(x.body()), span_of(y.body()), span_of(z.body()),
              std::span<double>(out.data(), out.size()));
  return TangentVec::from_body(p, out);
}

double spd_inner(const TangentVec& x, const TangentVec& y) {
  const Matrix& p = x.base().inverse();
  const Matrix a = p * x.ambient();
  const Matrix b = y.base().inverse() * y.ambient();
  return (a * b.transpose()).trace();
}

double classic_affine_distance(const SpdPoint& q1, const SpdPoint& q2) {
  require_same_dim(q1, q2);
  // Eigenvalues of Q1^{-1/2} Q2 Q1^{-1/2} are the squared singular values of
  // Q2^{1/2} Q1^{-1/2}; the SVD keeps the small ones accurate.
  const Matrix b = SymEig(q2.mat()).sqrt() * SymEig(q1.mat()).inv_sqrt();
  const Eigen::JacobiSVD<Matrix> svd(b);
  const auto sv = svd.singularValues().array();
  if ((sv <= 0.0).any()) throw NumericalRangeError("classic distance: singular product");
  return std::sqrt(sv.log().square().sum());
}

}  // namespace spdtraj
