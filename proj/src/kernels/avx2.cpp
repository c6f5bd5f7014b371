// Compiled with -mavx2 -mfma; only reached through the runtime dispatch table.
#include "biquad/kernels.hpp"

#include <immintrin.h>

namespace biquad::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double quad_form(const double* a, const double* v, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] == 0.0) continue;
    acc += v[i] * dot(a + i * n, v, n);
  }
  return acc;
}

void kron(const double* a, std::size_t na, const double* b, std::size_t nb, double alpha,
          double* out) {
  for (std::size_t i = 0; i < na; ++i) {
    const __m256d s = _mm256_set1_pd(alpha * a[i]);
    double* dst = out + i * nb;
    std::size_t j = 0;
    for (; j + 4 <= nb; j += 4) _mm256_storeu_pd(dst + j, _mm256_mul_pd(s, _mm256_loadu_pd(b + j)));
    const double ss = alpha * a[i];
    for (; j < nb; ++j) dst[j] = ss * b[j];
  }
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace biquad::kernels::avx2
