#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dofnet/matrix.hpp"
#include "dofnet/procedure.hpp"
#include "dofnet/rng.hpp"

// Complexity estimators over an abstract modeling procedure: vertical and
// horizontal generalized degrees of freedom (response-flip sensitivity),
// the cross-validated effective number of parameters, and the mean-LRT null
// degrees of freedom.

namespace dofnet {

enum class ComplexityMethod { gdf_vertical, gdf_horizontal, p_cv, null_dof };

struct ComplexityEstimate {
  double value = 0.0;
  double std_error = 0.0;
  ComplexityMethod method = ComplexityMethod::gdf_vertical;
  std::size_t internal_reps = 1;    // replicates / sweeps / CV repeats used
  std::size_t flips_per_step = 0;   // k (horizontal GDF)
  std::size_t folds = 0;            // K (p_cv)
  std::size_t sweep_columns = 0;    // m = N * ceil(n/k) (horizontal GDF)
  std::size_t discarded = 0;        // replicates dropped due to fit failures
};

// One sweep of localized perturbations: ceil(n/k) response vectors, each
// differing from the original y on a disjoint flip-set; the sets partition
// {0,...,n-1} and only the last may be smaller than k.
struct FlipSweep {
  std::vector<std::vector<double>> perturbed;
  std::vector<std::vector<std::size_t>> flip_sets;
};

FlipSweep flip_sweep(const std::vector<double>& y, std::size_t k, Rng& rng);

// Stratified fold assignment: class-0 and class-1 indices are shuffled
// independently and dealt round-robin, so per-class fold sizes differ by at
// most one. Returns fold index (0..K-1) per observation.
std::vector<std::size_t> stratified_folds(const std::vector<double>& y, std::size_t K, Rng& rng);

ComplexityEstimate gdf_vertical(const ModelingProcedure& proc, const Dataset& data,
                                std::size_t replications, std::uint64_t seed,
                                std::size_t threads = 1);

ComplexityEstimate gdf_horizontal(const ModelingProcedure& proc, const Dataset& data,
                                  std::size_t flips_per_step, std::size_t sweeps,
                                  std::uint64_t seed, std::size_t threads = 1);

ComplexityEstimate p_cv(const ModelingProcedure& proc, const Dataset& data, std::size_t folds,
                        std::size_t replications, std::uint64_t seed, std::size_t threads = 1);

// Per-replicate cross-validation quantities behind p_cv, also used where the
// cross-validated negative log-likelihood itself is reported.
struct CvReplicates {
  std::vector<double> neg_lcv;      // -l_CV per replicate
  std::vector<double> p_cv_values;  // l_m - l_CV per replicate
  std::size_t discarded = 0;
};

CvReplicates cv_replicates(const ModelingProcedure& proc, const Dataset& data, std::size_t folds,
                           std::size_t replications, std::uint64_t seed,
                           std::size_t threads = 1);

double lrt_statistic(const std::vector<double>& y, const std::vector<double>& yhat);

using DataGenerator = std::function<Dataset(Rng&)>;

ComplexityEstimate null_dof(const ModelingProcedure& proc, const DataGenerator& generator,
                            std::size_t replications, std::uint64_t seed,
                            std::size_t threads = 1);

// Default inversion count: 10% of n, at least 1.
inline std::size_t default_flips(std::size_t n) {
  const std::size_t k = static_cast<std::size_t>(0.1 * static_cast<double>(n) + 0.5);
  return k > 0 ? k : 1;
}

}  // namespace dofnet
