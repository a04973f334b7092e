#include "dofnet/complexity.hpp"

#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include "dofnet/parallel.hpp"

namespace dofnet {

namespace {

constexpr double kDiscardCap = 0.2;

struct MeanSd {
  double mean = 0.0;
  double se = 0.0;
};

MeanSd mean_and_se(const std::vector<double>& v) {
  MeanSd out;
  const std::size_t n = v.size();
  if (n == 0) return out;
  out.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
  if (n < 2) return out;
  double ss = 0.0;
  for (double x : v) ss += (x - out.mean) * (x - out.mean);
  out.se = std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
  return out;
}

void check_discards(std::size_t discarded, std::size_t total, const char* what) {
  if (total == 0 || static_cast<double>(discarded) > kDiscardCap * static_cast<double>(total))
    throw std::runtime_error(std::string(what) +
                             ": too many fit failures (" + std::to_string(discarded) + "/" +
                             std::to_string(total) + ")");
}

}  // namespace

FlipSweep flip_sweep(const std::vector<double>& y, std::size_t k, Rng& rng) {
  const std::size_t n = y.size();
  if (k < 1 || k > n) throw std::invalid_argument("flip_sweep: k must satisfy 1 <= k <= n");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  shuffle_inplace(order, rng);

  FlipSweep sweep;
  for (std::size_t start = 0; start < n; start += k) {
    const std::size_t stop = std::min(start + k, n);
    std::vector<std::size_t> set(order.begin() + start, order.begin() + stop);
    std::vector<double> perturbed = y;
    for (std::size_t idx : set) perturbed[idx] = 1.0 - perturbed[idx];
    sweep.flip_sets.push_back(std::move(set));
    sweep.perturbed.push_back(std::move(perturbed));
  }
  return sweep;
}

std::vector<std::size_t> stratified_folds(const std::vector<double>& y, std::size_t K, Rng& rng) {
  const std::size_t n = y.size();
  if (K < 2 || K > n) throw std::invalid_argument("stratified_folds: need 2 <= K <= n");
  std::vector<std::size_t> zeros, ones;
  for (std::size_t i = 0; i < n; ++i) (y[i] == 1.0 ? ones : zeros).push_back(i);
  if (zeros.empty() || ones.empty())
    throw std::invalid_argument("stratified_folds: both classes must be nonempty");
  if (K > zeros.size() || K > ones.size())
    std::cerr << "[dofnet] warning: fold count " << K
              << " exceeds a class size; some folds will lack that class\n";

  std::vector<std::size_t> assignment(n);
  for (auto* cls : {&zeros, &ones}) {
    shuffle_inplace(*cls, rng);
    for (std::size_t t = 0; t < cls->size(); ++t) assignment[(*cls)[t]] = t % K;
  }
  return assignment;
}

ComplexityEstimate gdf_vertical(const ModelingProcedure& proc, const Dataset& data,
                                std::size_t replications, std::uint64_t seed,
                                std::size_t threads) {
  if (replications < 1) throw std::invalid_argument("gdf_vertical: replications must be >= 1");
  data.validate();
  const std::size_t n = data.n();

  std::vector<double> rep_sum(replications);
  std::vector<char> rep_ok(replications, 0);
  parallel_for(replications, threads, [&](std::size_t j) {
    const std::uint64_t fit_seed = derive_seed(seed, j, 0);
    Rng perm_rng(derive_seed(seed, j, 1));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    shuffle_inplace(order, perm_rng);
    try {
      const auto baseline = proc.fit(data.X, data.y, fit_seed);
      const std::vector<double>& yhat = baseline->fitted();
      double sum = 0.0;
      std::vector<double> yp = data.y;
      for (std::size_t i : order) {
        yp[i] = 1.0 - yp[i];
        const auto refit = proc.fit(data.X, yp, fit_seed);
        const double delta = data.y[i] == 1.0 ? -1.0 : 1.0;  // (-1)^{y_i}
        sum += (refit->fitted()[i] - yhat[i]) / delta;
        yp[i] = data.y[i];
      }
      rep_sum[j] = sum;
      rep_ok[j] = 1;
    } catch (const std::exception& e) {
      std::cerr << "[dofnet] gdf_vertical replicate " << j << " discarded: " << e.what() << "\n";
    }
  });

  std::vector<double> kept;
  for (std::size_t j = 0; j < replications; ++j)
    if (rep_ok[j]) kept.push_back(rep_sum[j]);
  check_discards(replications - kept.size(), replications, "gdf_vertical");

  const MeanSd ms = mean_and_se(kept);
  ComplexityEstimate est;
  est.value = ms.mean;
  est.std_error = ms.se;
  est.method = ComplexityMethod::gdf_vertical;
  est.internal_reps = kept.size();
  est.discarded = replications - kept.size();
  return est;
}

ComplexityEstimate gdf_horizontal(const ModelingProcedure& proc, const Dataset& data,
                                  std::size_t flips_per_step, std::size_t sweeps,
                                  std::uint64_t seed, std::size_t threads) {
  data.validate();
  const std::size_t n = data.n();
  if (flips_per_step < 1 || flips_per_step > n)
    throw std::invalid_argument("gdf_horizontal: k must satisfy 1 <= k <= n");
  if (sweeps < 2) throw std::invalid_argument("gdf_horizontal: need at least 2 sweeps");

  // Per-sweep, per-row accumulators over that sweep's columns:
  // count, sum of perturbed responses (0/1, so also the sum of squares),
  // sum of predictions, and sum of response*prediction cross-products.
  struct RowStats {
    std::vector<double> cnt, sx, sp, sxp;
    explicit RowStats(std::size_t n) : cnt(n, 0.0), sx(n, 0.0), sp(n, 0.0), sxp(n, 0.0) {}
  };
  std::vector<RowStats> per_sweep(sweeps, RowStats(n));
  std::vector<char> sweep_ok(sweeps, 0);

  parallel_for(sweeps, threads, [&](std::size_t g) {
    Rng sweep_rng(derive_seed(seed, g, 0));
    const FlipSweep sweep = flip_sweep(data.y, flips_per_step, sweep_rng);
    RowStats& rs = per_sweep[g];
    try {
      for (std::size_t t = 0; t < sweep.perturbed.size(); ++t) {
        const auto model = proc.fit(data.X, sweep.perturbed[t], derive_seed(seed, g, t + 1));
        const std::vector<double>& pred = model->fitted();
        const std::vector<double>& yp = sweep.perturbed[t];
        for (std::size_t i = 0; i < n; ++i) {
          rs.cnt[i] += 1.0;
          rs.sx[i] += yp[i];
          rs.sp[i] += pred[i];
          rs.sxp[i] += yp[i] * pred[i];
        }
      }
      sweep_ok[g] = 1;
    } catch (const std::exception& e) {
      std::cerr << "[dofnet] gdf_horizontal sweep " << g << " discarded: " << e.what() << "\n";
    }
  });

  std::vector<std::size_t> kept;
  for (std::size_t g = 0; g < sweeps; ++g)
    if (sweep_ok[g]) kept.push_back(g);
  check_discards(sweeps - kept.size(), sweeps, "gdf_horizontal");
  if (kept.size() < 2) throw std::runtime_error("gdf_horizontal: fewer than 2 usable sweeps");

  // Sum of per-row simple-regression slopes of predictions on perturbed
  // responses, computed from combined accumulators (optionally excluding one
  // sweep, for the delete-one jackknife).
  auto gdf_excluding = [&](std::size_t excluded) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double cnt = 0.0, sx = 0.0, sp = 0.0, sxp = 0.0;
      for (std::size_t g : kept) {
        if (g == excluded) continue;
        cnt += per_sweep[g].cnt[i];
        sx += per_sweep[g].sx[i];
        sp += per_sweep[g].sp[i];
        sxp += per_sweep[g].sxp[i];
      }
      const double sxx = sx;  // responses are 0/1
      const double denom = cnt * sxx - sx * sx;
      if (denom <= 0.0)
        throw std::runtime_error("gdf_horizontal: zero variance in a perturbed-response row");
      total += (cnt * sxp - sx * sp) / denom;
    }
    return total;
  };

  const std::size_t kNone = static_cast<std::size_t>(-1);
  ComplexityEstimate est;
  est.value = gdf_excluding(kNone);
  est.method = ComplexityMethod::gdf_horizontal;
  est.internal_reps = kept.size();
  est.flips_per_step = flips_per_step;
  est.sweep_columns = kept.size() * ((n + flips_per_step - 1) / flips_per_step);
  est.discarded = sweeps - kept.size();

  // Delete-one-sweep jackknife.
  const std::size_t N = kept.size();
  std::vector<double> loo(N);
  for (std::size_t idx = 0; idx < N; ++idx) loo[idx] = gdf_excluding(kept[idx]);
  const double loo_mean = std::accumulate(loo.begin(), loo.end(), 0.0) / static_cast<double>(N);
  double ss = 0.0;
  for (double v : loo) ss += (v - loo_mean) * (v - loo_mean);
  est.std_error = std::sqrt(ss * static_cast<double>(N - 1) / static_cast<double>(N));
  return est;
}

CvReplicates cv_replicates(const ModelingProcedure& proc, const Dataset& data, std::size_t folds,
                           std::size_t replications, std::uint64_t seed, std::size_t threads) {
  data.validate();
  if (folds < 2) throw std::invalid_argument("p_cv: need K >= 2");
  if (replications < 1) throw std::invalid_argument("p_cv: replications must be >= 1");
  if (data.n1() == 0 || data.n0() == 0)
    throw std::invalid_argument("p_cv: data must contain both classes");
  const std::size_t n = data.n();

  std::vector<double> rep_pcv(replications), rep_neglcv(replications);
  std::vector<char> rep_ok(replications, 0);
  parallel_for(replications, threads, [&](std::size_t r) {
    try {
      Rng fold_rng(derive_seed(seed, r, 0));
      const std::vector<std::size_t> assignment = stratified_folds(data.y, folds, fold_rng);
      const auto full = proc.fit(data.X, data.y, derive_seed(seed, r, 1));
      const double lm = full->loglik();

      double lcv = 0.0;
      for (std::size_t f = 0; f < folds; ++f) {
        std::vector<std::size_t> train_idx, test_idx;
        for (std::size_t i = 0; i < n; ++i)
          (assignment[i] == f ? test_idx : train_idx).push_back(i);
        if (test_idx.empty()) continue;
        std::vector<double> ytrain(train_idx.size()), ytest(test_idx.size());
        for (std::size_t i = 0; i < train_idx.size(); ++i) ytrain[i] = data.y[train_idx[i]];
        for (std::size_t i = 0; i < test_idx.size(); ++i) ytest[i] = data.y[test_idx[i]];
        const Matrix Xtrain = data.X.take_rows(train_idx);
        const Matrix Xtest = data.X.take_rows(test_idx);
        const auto model = proc.fit(Xtrain, ytrain, derive_seed(seed, r, 2 + f));
        std::vector<double> pred = model->predict(Xtest);
        for (double& v : pred) v = clamp_prob(v);
        lcv += bernoulli_loglik(ytest, pred);
      }
      rep_pcv[r] = lm - lcv;
      rep_neglcv[r] = -lcv;
      rep_ok[r] = 1;
    } catch (const std::exception& e) {
      std::cerr << "[dofnet] p_cv replicate " << r << " discarded: " << e.what() << "\n";
    }
  });

  CvReplicates out;
  for (std::size_t r = 0; r < replications; ++r) {
    if (rep_ok[r]) {
      out.p_cv_values.push_back(rep_pcv[r]);
      out.neg_lcv.push_back(rep_neglcv[r]);
    }
  }
  out.discarded = replications - out.p_cv_values.size();
  check_discards(out.discarded, replications, "p_cv");
  return out;
}

ComplexityEstimate p_cv(const ModelingProcedure& proc, const Dataset& data, std::size_t folds,
                        std::size_t replications, std::uint64_t seed, std::size_t threads) {
  const CvReplicates reps = cv_replicates(proc, data, folds, replications, seed, threads);
  const MeanSd ms = mean_and_se(reps.p_cv_values);
  ComplexityEstimate est;
  est.value = ms.mean;  // negative values reported as-is
  est.std_error = ms.se;
  est.method = ComplexityMethod::p_cv;
  est.internal_reps = reps.p_cv_values.size();
  est.folds = folds;
  est.discarded = reps.discarded;
  return est;
}

double lrt_statistic(const std::vector<double>& y, const std::vector<double>& yhat) {
  if (y.size() != yhat.size()) throw std::invalid_argument("lrt_statistic: length mismatch");
  const double n = static_cast<double>(y.size());
  double n1 = 0.0;
  for (double v : y) n1 += v;
  const double n0 = n - n1;

  double lfit = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k)
    lfit += y[k] * std::log(yhat[k]) + (1.0 - y[k]) * std::log(1.0 - yhat[k]);
  const double t1 = n1 > 0.0 ? n1 * std::log(n1) : 0.0;  // 0*log(0) = 0
  const double t0 = n0 > 0.0 ? n0 * std::log(n0) : 0.0;
  return 2.0 * (lfit - t1 - t0 + n * std::log(n));
}

ComplexityEstimate null_dof(const ModelingProcedure& proc, const DataGenerator& generator,
                            std::size_t replications, std::uint64_t seed, std::size_t threads) {
  if (replications < 2) throw std::invalid_argument("null_dof: replications must be >= 2");

  std::vector<double> rep_val(replications);
  std::vector<char> rep_ok(replications, 0);
  parallel_for(replications, threads, [&](std::size_t r) {
    try {
      Rng data_rng(derive_seed(seed, r, 0));
      const Dataset d = generator(data_rng);
      if (d.n1() == 0 || d.n0() == 0) {
        rep_val[r] = 0.0;  // degenerate response: LRT defined as 0, still counted
        rep_ok[r] = 1;
        return;
      }
      const auto model = proc.fit(d.X, d.y, derive_seed(seed, r, 1));
      rep_val[r] = lrt_statistic(d.y, model->fitted());
      rep_ok[r] = 1;
    } catch (const std::exception& e) {
      std::cerr << "[dofnet] null_dof replicate " << r << " discarded: " << e.what() << "\n";
    }
  });

  std::vector<double> kept;
  for (std::size_t r = 0; r < replications; ++r)
    if (rep_ok[r]) kept.push_back(rep_val[r]);
  check_discards(replications - kept.size(), replications, "null_dof");

  const MeanSd ms = mean_and_se(kept);
  ComplexityEstimate est;
  est.value = ms.mean;
  est.std_error = ms.se;
  est.method = ComplexityMethod::null_dof;
  est.internal_reps = kept.size();
  est.discarded = replications - kept.size();
  return est;
}

}  // namespace dofnet
