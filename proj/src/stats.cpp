#include "dofnet/stats.hpp"

#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

namespace dofnet {

namespace {

// Continued fraction for the regularized incomplete beta (Lentz's method).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

// Regularized incomplete beta I_x(a, b).
double betai(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log(1.0 - x);
  const double front = std::exp(ln);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

// P(T <= t) for Student t with df degrees of freedom.
double t_cdf(double t, double df) {
  const double ib = betai(df / 2.0, 0.5, df / (df + t * t));
  return t >= 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
}

}  // namespace

std::pair<double, double> mean_se(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("mean_se: need at least 2 samples");
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double se = std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
  return {mean, se};
}

double t_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("t_quantile: p must be in (0,1)");
  if (!(df > 0.0)) throw std::invalid_argument("t_quantile: df must be positive");
  if (p == 0.5) return 0.0;
  // Symmetric, so solve for the upper half and mirror.
  const double target = p > 0.5 ? p : 1.0 - p;
  double lo = 0.0, hi = 1.0;
  while (t_cdf(hi, df) < target) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (t_cdf(mid, df) < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12 * (1.0 + hi)) break;
  }
  const double q = 0.5 * (lo + hi);
  return p > 0.5 ? q : -q;
}

std::pair<double, double> paired_t_ci(const PairedSample& sample, double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("paired_t_ci: bad level");
  const std::size_t n = sample.diffs.size();
  if (n < 2) throw std::invalid_argument("paired_t_ci: need at least 2 differences");
  const auto [mean, se] = mean_se(sample.diffs);
  const double tq = t_quantile(1.0 - (1.0 - level) / 2.0, static_cast<double>(n - 1));
  return {mean, tq * se};
}

std::pair<PairedSample, PairedSample> paired_delta_run(const PairedDeltaConfig& config,
                                                       std::size_t iterations,
                                                       std::uint64_t master_seed) {
  PairedSample dgdf, dpcv;
  dgdf.label = PairedLabel::delta_gdf;
  dpcv.label = PairedLabel::delta_pcv;

  const FfnnProcedure proc(config.model);
  for (std::size_t it = 0; it < iterations; ++it) {
    // Dataset seeds are shared across arms so identical generators yield
    // identical data; estimator seeds are shared so fit-seed streams match.
    Rng rng_a(derive_seed(master_seed, it, 1));
    Rng rng_b(derive_seed(master_seed, it, 1));
    const std::uint64_t gdf_seed = derive_seed(master_seed, it, 2);
    const std::uint64_t pcv_seed = derive_seed(master_seed, it, 3);
    try {
      const Dataset da = config.gen_a(rng_a);
      const Dataset db = config.gen_b(rng_b);
      const ComplexityEstimate ga =
          gdf_horizontal(proc, da, config.gdf_flips, config.gdf_sweeps, gdf_seed, config.threads);
      const ComplexityEstimate gb =
          gdf_horizontal(proc, db, config.gdf_flips, config.gdf_sweeps, gdf_seed, config.threads);
      const ComplexityEstimate pa =
          p_cv(proc, da, config.cv_folds, config.cv_reps, pcv_seed, config.threads);
      const ComplexityEstimate pb =
          p_cv(proc, db, config.cv_folds, config.cv_reps, pcv_seed, config.threads);
      dgdf.diffs.push_back(ga.value - gb.value);
      dgdf.arm_a.push_back(ga.value);
      dgdf.arm_b.push_back(gb.value);
      dpcv.diffs.push_back(pa.value - pb.value);
      dpcv.arm_a.push_back(pa.value);
      dpcv.arm_b.push_back(pb.value);
    } catch (const std::exception& e) {
      std::cerr << "[dofnet] paired_delta_run iteration " << it << " dropped: " << e.what()
                << "\n";
    }
  }
  return {std::move(dgdf), std::move(dpcv)};
}

}  // namespace dofnet
