#include "doctest.h"

#include <cmath>
#include <vector>

#include "dofnet/kernels.hpp"
#include "dofnet/rng.hpp"

using namespace dofnet;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng, double lo = -3.0, double hi = 3.0) {
  std::vector<double> v(n);
  for (double& x : v) x = runif(rng, lo, hi);
  return v;
}

// Long-double reference accumulation, independent of the production kernels.
double ref_dot(const std::vector<double>& a, const std::vector<double>& b) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long double>(a[i]) * b[i];
  return static_cast<double>(s);
}

}  // namespace

TEST_CASE("scalar kernels match reference accumulation") {
  Rng rng(42);
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 13u, 64u, 65u, 200u}) {
    const auto a = random_vec(n, rng);
    const auto b = random_vec(n, rng);
    const double d = kernels::scalar::dot(a.data(), b.data(), n);
    CHECK(d == doctest::Approx(ref_dot(a, b)).epsilon(1e-13));
    long double s = 0.0L, q = 0.0L;
    for (double x : a) {
      s += x;
      q += static_cast<long double>(x) * x;
    }
    CHECK(kernels::scalar::sum(a.data(), n) ==
          doctest::Approx(static_cast<double>(s)).epsilon(1e-13));
    CHECK(kernels::scalar::squared_norm(a.data(), n) ==
          doctest::Approx(static_cast<double>(q)).epsilon(1e-13));
  }
}

TEST_CASE("scalar axpy accumulates y += alpha x") {
  Rng rng(7);
  const auto x = random_vec(17, rng);
  auto y = random_vec(17, rng);
  const auto y0 = y;
  kernels::scalar::axpy(0.75, x.data(), y.data(), 17);
  for (std::size_t i = 0; i < 17; ++i)
    CHECK(y[i] == doctest::Approx(y0[i] + 0.75 * x[i]).epsilon(1e-15));
}

#if defined(DOFNET_BUILD_AVX2)
TEST_CASE("avx2 kernels agree with scalar reference") {
  if (!kernels::avx2_available()) return;  // not reachable on this CPU
  Rng rng(99);
  for (std::size_t n = 0; n <= 67; ++n) {
    const auto a = random_vec(n, rng);
    const auto b = random_vec(n, rng);
    CHECK(kernels::avx2::dot(a.data(), b.data(), n) ==
          doctest::Approx(kernels::scalar::dot(a.data(), b.data(), n)).epsilon(1e-12));
    CHECK(kernels::avx2::sum(a.data(), n) ==
          doctest::Approx(kernels::scalar::sum(a.data(), n)).epsilon(1e-12));
    CHECK(kernels::avx2::squared_norm(a.data(), n) ==
          doctest::Approx(kernels::scalar::squared_norm(a.data(), n)).epsilon(1e-12));
    auto y1 = random_vec(n, rng);
    auto y2 = y1;
    kernels::avx2::axpy(-1.3, a.data(), y1.data(), n);
    kernels::scalar::axpy(-1.3, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-12));
  }
}
#endif

TEST_CASE("dispatch matches the active implementation") {
  Rng rng(5);
  const auto a = random_vec(33, rng);
  const auto b = random_vec(33, rng);
  const kernels::Isa isa = kernels::active_isa();
  const double via_dispatch = kernels::dot(a.data(), b.data(), 33);
#if defined(DOFNET_BUILD_AVX2)
  const double direct = isa == kernels::Isa::avx2
                            ? kernels::avx2::dot(a.data(), b.data(), 33)
                            : kernels::scalar::dot(a.data(), b.data(), 33);
#else
  const double direct = kernels::scalar::dot(a.data(), b.data(), 33);
#endif
  CHECK(via_dispatch == direct);
  CHECK(!kernels::isa_name(isa).empty());
}

TEST_CASE("set_isa can force the scalar path") {
  const kernels::Isa before = kernels::active_isa();
  kernels::set_isa(kernels::Isa::scalar);
  CHECK(kernels::active_isa() == kernels::Isa::scalar);
  Rng rng(11);
  const auto a = random_vec(12, rng);
  CHECK(kernels::sum(a.data(), 12) == kernels::scalar::sum(a.data(), 12));
  kernels::set_isa(before);
}
