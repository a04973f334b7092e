#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dofnet/complexity.hpp"
#include "dofnet/ffnn.hpp"

// Aggregation over external replicates and the seed-matched paired design
// comparing true-model and intercept-only data generation.

namespace dofnet {

enum class PairedLabel { delta_gdf, delta_pcv };

struct PairedSample {
  std::vector<double> diffs;          // per-iteration (arm A minus arm B)
  std::vector<double> arm_a, arm_b;   // the per-iteration estimates behind the diffs
  PairedLabel label = PairedLabel::delta_gdf;
};

// Sample mean and SD/sqrt(n); requires length >= 2.
std::pair<double, double> mean_se(const std::vector<double>& samples);

// Student-t upper quantile t_{p, df}, inverted from the CDF to ~1e-10.
double t_quantile(double p, double df);

// (center, half_width) of the level-confidence paired-t interval.
std::pair<double, double> paired_t_ci(const PairedSample& sample, double level);

struct PairedDeltaConfig {
  DataGenerator gen_a;  // e.g. true-model generation
  DataGenerator gen_b;  // e.g. intercept-only generation
  ModelConfig model;    // shared fit configuration (seed field ignored)
  std::size_t gdf_flips = 20;
  std::size_t gdf_sweeps = 100;
  std::size_t cv_folds = 10;
  std::size_t cv_reps = 100;
  std::size_t threads = 1;
};

// Per iteration: generates one dataset per arm, then computes horizontal GDF
// and p_cv under each arm with identical derived fit-seed streams, recording
// the differences. Iterations failing on either arm are dropped pairwise.
std::pair<PairedSample, PairedSample> paired_delta_run(const PairedDeltaConfig& config,
                                                       std::size_t iterations,
                                                       std::uint64_t master_seed);

}  // namespace dofnet
