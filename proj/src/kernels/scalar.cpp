#include "biquad/kernels.hpp"

namespace biquad::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double quad_form(const double* a, const double* v, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = a + i * n;
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j) r += row[j] * v[j];
    acc += v[i] * r;
  }
  return acc;
}

void kron(const double* a, std::size_t na, const double* b, std::size_t nb, double alpha,
          double* out) {
  for (std::size_t i = 0; i < na; ++i) {
    const double s = alpha * a[i];
    double* dst = out + i * nb;
    for (std::size_t j = 0; j < nb; ++j) dst[j] = s * b[j];
  }
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace biquad::kernels::scalar
