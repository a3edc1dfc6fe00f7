// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "spdtraj/kernels.hpp"

namespace spdtraj::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sq_dist_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double interp_sq_dist_avx2(const double* a, const double* b0, const double* b1, double frac,
                           double scale, std::size_t n) {
  const double w0 = scale * (1.0 - frac);
  const double w1 = scale * frac;
  const __m256d vw0 = _mm256_set1_pd(w0);
  const __m256d vw1 = _mm256_set1_pd(w1);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d m = _mm256_mul_pd(vw0, _mm256_loadu_pd(b0 + i));
    m = _mm256_fmadd_pd(vw1, _mm256_loadu_pd(b1 + i), m);
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), m);
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - (w0 * b0[i] + w1 * b1[i]);
    s += d * d;
  }
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double centered_dot_avx2(const double* x, const double* y, double mx, double my, std::size_t n) {
  const __m256d vmx = _mm256_set1_pd(mx);
  const __m256d vmy = _mm256_set1_pd(my);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d dx0 = _mm256_sub_pd(_mm256_loadu_pd(x + i), vmx);
    const __m256d dy0 = _mm256_sub_pd(_mm256_loadu_pd(y + i), vmy);
    const __m256d dx1 = _mm256_sub_pd(_mm256_loadu_pd(x + i + 4), vmx);
    const __m256d dy1 = _mm256_sub_pd(_mm256_loadu_pd(y + i + 4), vmy);
    acc0 = _mm256_fmadd_pd(dx0, dy0, acc0);
    acc1 = _mm256_fmadd_pd(dx1, dy1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d dx0 = _mm256_sub_pd(_mm256_loadu_pd(x + i), vmx);
    const __m256d dy0 = _mm256_sub_pd(_mm256_loadu_pd(y + i), vmy);
    acc0 = _mm256_fmadd_pd(dx0, dy0, acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += (x[i] - mx) * (y[i] - my);
  return s;
}

}  // namespace

const Table& avx2_table() {
  static const Table t{dot_avx2, sq_dist_avx2, interp_sq_dist_avx2, axpy_avx2,
                       centered_dot_avx2};
  return t;
}

}  // namespace spdtraj::kernels
