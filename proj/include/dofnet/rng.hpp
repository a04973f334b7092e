#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

// All randomness flows through explicitly passed engines. Variate generation
// is hand-rolled (not <random> distributions) so that a given seed produces
// the same stream on every standard library implementation.

namespace dofnet {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic seed derivation: each independent work unit (replicate,
// sweep, fold, ...) hashes its coordinates so results do not depend on
// execution order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return h;
}

// Uniform on [0, 1).
inline double runif(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double runif(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * runif(rng);
}

// Standard normal via Box-Muller (one variate per call).
inline double rnorm(Rng& rng) {
  double u1 = runif(rng);
  while (u1 <= 0.0) u1 = runif(rng);
  const double u2 = runif(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline int rbernoulli(Rng& rng, double p) { return runif(rng) < p ? 1 : 0; }

// Uniform integer on [0, n).
inline std::size_t rindex(Rng& rng, std::size_t n) {
  return static_cast<std::size_t>(runif(rng) * static_cast<double>(n)) % n;
}

template <typename T>
void shuffle_inplace(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rindex(rng, i)]);
  }
}

}  // namespace dofnet
