#pragma once

// Dense inner-loop kernels with a scalar reference and an AVX2/FMA variant.
// The variant is chosen once at first use from the CPU feature flags; setting
// BIQUAD_SIMD=scalar in the environment pins the scalar reference.

#include <cstddef>
#include <span>
#include <string_view>

namespace biquad::kernels {

enum class Isa { Scalar, Avx2 };

/// ISA of the dispatch table currently in use.
Isa active_isa();
std::string_view isa_name(Isa isa);
/// True when the AVX2 variant was compiled in and the CPU supports it.
bool avx2_available();
/// Replace the dispatch table. Throws std::invalid_argument when `isa` is unavailable.
void force_isa(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);
/// vᵀ A v for a row-major n×n matrix A (n = v.size()).
double quad_form(std::span<const double> a, std::span<const double> v);
/// out = alpha · (a ⊗ b), out.size() == a.size() * b.size().
void kron(std::span<const double> a, std::span<const double> b, double alpha,
          std::span<double> out);
/// y += alpha · x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// Direct access to each variant, for equivalence testing.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double quad_form(const double* a, const double* v, std::size_t n);
void kron(const double* a, std::size_t na, const double* b, std::size_t nb, double alpha,
          double* out);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace scalar

#if defined(BIQUAD_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double quad_form(const double* a, const double* v, std::size_t n);
void kron(const double* a, std::size_t na, const double* b, std::size_t nb, double alpha,
          double* out);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace avx2
#endif

}  // namespace biquad::kernels
