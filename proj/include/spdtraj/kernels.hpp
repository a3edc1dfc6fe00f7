#pragma once

// Data-parallel inner loops shared by the fiber, alignment and feature code.
//
// Every kernel has a scalar reference implementation; wider variants are
// selected once at startup from the running CPU's capabilities. All variants
// must agree with the scalar path to rounding (see tests/test_kernels.cpp).

#include <cstddef>
#include <string_view>

namespace spdtraj::kernels {

enum class Backend { kScalar, kAvx2 };

struct Table {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i (a[i] - b[i])^2
  double (*sq_dist)(const double* a, const double* b, std::size_t n);
  // sum_i (a[i] - scale * ((1 - frac) * b0[i] + frac * b1[i]))^2
  double (*interp_sq_dist)(const double* a, const double* b0, const double* b1,
                           double frac, double scale, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // sum_i (x[i] - mx) * (y[i] - my)
  double (*centered_dot)(const double* x, const double* y, double mx, double my,
                         std::size_t n);
};

const Table& scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
const Table& avx2_table();
#endif

bool backend_available(Backend b);

// Pin a backend (tests, benchmarks). Throws ValidationError when the CPU
// cannot run it.
void select(Backend b);

Backend active_backend();
std::string_view backend_name(Backend b);

// The table in use. First call picks the widest supported backend.
const Table& active();

inline double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}
inline double sq_dist(const double* a, const double* b, std::size_t n) {
  return active().sq_dist(a, b, n);
}
inline double interp_sq_dist(const double* a, const double* b0, const double* b1,
                             double frac, double scale, std::size_t n) {
  return active().interp_sq_dist(a, b0, b1, frac, scale, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active().axpy(alpha, x, y, n);
}
inline double centered_dot(const double* x, const double* y, double mx, double my,
                           std::size_t n) {
  return active().centered_dot(x, y, mx, my, n);
}

}  // namespace spdtraj::kernels
