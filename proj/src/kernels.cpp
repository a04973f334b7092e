#include "dofnet/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace dofnet::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double squared_norm(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace scalar

bool avx2_available() {
#if defined(DOFNET_BUILD_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

struct Dispatch {
  Isa isa;
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  double (*squared_norm)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
};

Dispatch make_dispatch(Isa isa) {
#if defined(DOFNET_BUILD_AVX2)
  if (isa == Isa::avx2) {
    return {Isa::avx2, avx2::dot, avx2::sum, avx2::squared_norm, avx2::axpy};
  }
#endif
  return {Isa::scalar, scalar::dot, scalar::sum, scalar::squared_norm, scalar::axpy};
}

Isa detect_isa() {
  if (const char* env = std::getenv("DOFNET_ISA")) {
    if (std::string(env) == "scalar") return Isa::scalar;
  }
  return avx2_available() ? Isa::avx2 : Isa::scalar;
}

Dispatch g_dispatch = make_dispatch(detect_isa());

}  // namespace

Isa active_isa() { return g_dispatch.isa; }

std::string isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void set_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2_available())
    throw std::runtime_error("AVX2 kernels not available on this machine");
  g_dispatch = make_dispatch(isa);
}

double dot(const double* a, const double* b, std::size_t n) { return g_dispatch.dot(a, b, n); }
double sum(const double* a, std::size_t n) { return g_dispatch.sum(a, n); }
double squared_norm(const double* a, std::size_t n) { return g_dispatch.squared_norm(a, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { g_dispatch.axpy(alpha, x, y, n); }

}  // namespace dofnet::kernels
