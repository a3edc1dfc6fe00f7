#include "spdtraj/kernels.hpp"

namespace spdtraj::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sq_dist_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double interp_sq_dist_scalar(const double* a, const double* b0, const double* b1,
                             double frac, double scale, std::size_t n) {
  const double w0 = scale * (1.0 - frac);
  const double w1 = scale * frac;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - (w0 * b0[i] + w1 * b1[i]);
    s += d * d;
  }
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double centered_dot_scalar(const double* x, const double* y, double mx, double my,
                           std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += (x[i] - mx) * (y[i] - my);
  return s;
}

}  // namespace

const Table& scalar_table() {
  static const Table t{dot_scalar, sq_dist_scalar, interp_sq_dist_scalar, axpy_scalar,
                       centered_dot_scalar};
  return t;
}

}  // namespace spdtraj::kernels
