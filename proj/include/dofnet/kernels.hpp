#pragma once

#include <cstddef>
#include <string>

// Low-level double-precision kernels used by the network forward pass and
// gradient accumulation. A scalar reference implementation always exists;
// on x86-64 an AVX2+FMA variant is selected at runtime when the CPU supports
// it. The environment variable DOFNET_ISA=scalar forces the reference path.

namespace dofnet::kernels {

enum class Isa { scalar, avx2 };

// ISA chosen at startup (cpuid + DOFNET_ISA override).
Isa active_isa();
std::string isa_name(Isa isa);

// Force a specific ISA; throws if unavailable on this machine.
void set_isa(Isa isa);

double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double squared_norm(const double* a, std::size_t n);
// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);

// Reference implementations, exposed for equivalence tests.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double squared_norm(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace scalar

#if defined(DOFNET_BUILD_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double squared_norm(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace avx2
#endif

bool avx2_available();

}  // namespace dofnet::kernels
