#include "spdtraj/fiber.hpp"

#include <algorithm>
#include <cmath>

#include "spdtraj/error.hpp"
#include "spdtraj/kernels.hpp"

namespace spdtraj {
namespace {

void require_same_shape(const Fiber& a, const Fiber& b) {
  if (a.samples() != b.samples() || a.dim() != b.dim())
    throw ValidationError("fiber: shape mismatch");
}

}  // namespace

Fiber::Fiber(std::size_t samples, std::size_t dim)
    : samples_(samples), dim_(dim), data_(samples * dim, 0.0) {}

void Fiber::set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

Fiber& Fiber::operator+=(const Fiber& o) {
  require_same_shape(*this, o);
  kernels::axpy(1.0, o.data_.data(), data_.data(), data_.size());
  return *this;
}

Fiber& Fiber::operator-=(const Fiber& o) {
  require_same_shape(*this, o);
  kernels::axpy(-1.0, o.data_.data(), data_.data(), data_.size());
  return *this;
}

Fiber& Fiber::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

void Fiber::add_scaled(double alpha, const Fiber& o) {
  require_same_shape(*this, o);
  kernels::axpy(alpha, o.data_.data(), data_.data(), data_.size());
}

std::vector<double> trapezoid_weights(std::size_t samples) {
  if (samples < 2) return std::vector<double>(samples, 1.0);
  const double h = 1.0 / static_cast<double>(samples - 1);
  std::vector<double> w(samples, h);
  w.front() = w.back() = 0.5 * h;
  return w;
}

double l2_inner(const Fiber& a, const Fiber& b) {
  require_same_shape(a, b);
  const std::size_t t = a.samples();
  if (t == 0) return 0.0;
  if (t == 1) return kernels::dot(a.row(0).data(), b.row(0).data(), a.dim());
  const double h = 1.0 / static_cast<double>(t - 1);
  const double all = kernels::dot(a.flat().data(), b.flat().data(), a.flat().size());
  const double ends = kernels::dot(a.row(0).data(), b.row(0).data(), a.dim()) +
                      kernels::dot(a.row(t - 1).data(), b.row(t - 1).data(), a.dim());
  return h * (all - 0.5 * ends);
}

double l2_norm_sq(const Fiber& a) { return l2_inner(a, a); }

double l2_norm(const Fiber& a) { return std::sqrt(std::max(0.0, l2_norm_sq(a))); }

double l2_dist(const Fiber& a, const Fiber& b) {
  require_same_shape(a, b);
  const std::size_t t = a.samples();
  if (t == 0) return 0.0;
  if (t == 1) return std::sqrt(kernels::sq_dist(a.row(0).data(), b.row(0).data(), a.dim()));
  const double h = 1.0 / static_cast<double>(t - 1);
  const double all = kernels::sq_dist(a.flat().data(), b.flat().data(), a.flat().size());
  const double ends = kernels::sq_dist(a.row(0).data(), b.row(0).data(), a.dim()) +
                      kernels::sq_dist(a.row(t - 1).data(), b.row(t - 1).data(), a.dim());
  return std::sqrt(std::max(0.0, h * (all - 0.5 * ends)));
}

void interp_row(const Fiber& q, double s, std::span<double> out) {
  const std::size_t n = q.samples();
  const double pos = std::clamp(s, 0.0, 1.0) * static_cast<double>(n - 1);
  const auto k = std::min(static_cast<std::size_t>(pos), n - 2);
  const double f = pos - static_cast<double>(k);
  const auto a = q.row(k);
  const auto b = q.row(k + 1);
  for (std::size_t j = 0; j < q.dim(); ++j) out[j] = (1.0 - f) * a[j] + f * b[j];
}

}  // namespace spdtraj
