#include "biquad/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace biquad::kernels {

namespace {

struct Table {
  Isa isa;
  double (*dot)(const double*, const double*, std::size_t);
  double (*quad_form)(const double*, const double*, std::size_t);
  void (*kron)(const double*, std::size_t, const double*, std::size_t, double, double*);
  void (*axpy)(double, const double*, double*, std::size_t);
};

constexpr Table kScalar{Isa::Scalar, scalar::dot, scalar::quad_form, scalar::kron, scalar::axpy};
#if defined(BIQUAD_HAVE_AVX2)
constexpr Table kAvx2{Isa::Avx2, avx2::dot, avx2::quad_form, avx2::kron, avx2::axpy};
#endif

bool cpu_has_avx2() {
#if defined(BIQUAD_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table* select_table() {
  const char* env = std::getenv("BIQUAD_SIMD");
  if (env != nullptr && std::string(env) == "scalar") return &kScalar;
#if defined(BIQUAD_HAVE_AVX2)
  if (cpu_has_avx2()) return &kAvx2;
#endif
  return &kScalar;
}

std::atomic<const Table*>& table_slot() {
  static std::atomic<const Table*> slot{select_table()};
  return slot;
}

const Table& table() { return *table_slot().load(std::memory_order_acquire); }

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernels: operand size mismatch");
}

}  // namespace

Isa active_isa() { return table().isa; }

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool avx2_available() { return cpu_has_avx2(); }

void force_isa(Isa isa) {
  if (isa == Isa::Scalar) {
    table_slot().store(&kScalar, std::memory_order_release);
    return;
  }
#if defined(BIQUAD_HAVE_AVX2)
  if (cpu_has_avx2()) {
    table_slot().store(&kAvx2, std::memory_order_release);
    return;
  }
#endif
  throw std::invalid_argument("kernels: AVX2 variant not available on this build or CPU");
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size());
  return table().dot(a.data(), b.data(), a.size());
}

double quad_form(std::span<const double> a, std::span<const double> v) {
  require_same_size(a.size(), v.size() * v.size());
  return table().quad_form(a.data(), v.data(), v.size());
}

void kron(std::span<const double> a, std::span<const double> b, double alpha,
          std::span<double> out) {
  require_same_size(out.size(), a.size() * b.size());
  table().kron(a.data(), a.size(), b.data(), b.size(), alpha, out.data());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  require_same_size(x.size(), y.size());
  table().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace biquad::kernels
