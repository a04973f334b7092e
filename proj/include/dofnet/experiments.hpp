#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dofnet/csv.hpp"
#include "dofnet/ffnn.hpp"
#include "dofnet/matrix.hpp"

// Experiment harness: the null-scenario grid, the estimator-comparison
// curves, the seed-matched true-vs-intercept study, and the real-data subset
// selection and model comparison. Result files are byte-identical across
// reruns with the same master seed, independent of thread count.

namespace dofnet {

enum class ColumnKind { numeric, binary_factor, factor, ordered_count };

struct ColumnSpec {
  std::string column;
  ColumnKind kind = ColumnKind::numeric;
  std::vector<std::string> levels;  // factor/ordered kinds; order defines scores
  std::string reference_level;      // factor kinds; omitted => first level
};

struct RealDataSchema {
  std::string response_column;
  std::string response_positive_level;  // the level encoded as 1
  std::vector<ColumnSpec> covariates;

  static RealDataSchema from_json_file(const std::string& path);
};

// Encoded design matrix plus the grouping needed for subset enumeration:
// a k-level factor expands to k-1 dummy columns that travel together.
struct LoadedData {
  Dataset data;
  std::vector<std::string> feature_names;        // one per encoded column
  std::vector<std::size_t> feature_group;        // encoded column -> variable index
  std::vector<std::string> variable_names;       // one per candidate variable
};

LoadedData load_csv(const std::string& path, const RealDataSchema& schema);

enum class ExperimentKind { scenario_grid, estimator_curves, true_vs_intercept, real_data };

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::scenario_grid;
  std::vector<int> scenarios{1};
  std::vector<std::size_t> ns{200};
  std::vector<std::size_t> ps{2};
  std::vector<std::size_t> hiddens{2};
  std::vector<double> decays{0.01};
  double prevalence = 0.3;
  double intercept_prob = 0.5;

  std::size_t external_reps = 20;
  std::size_t gdf_sweeps = 100;    // internal sweeps for horizontal GDF
  std::size_t vertical_reps = 10;  // internal replicates for vertical GDF (curves)
  std::size_t pcv_reps = 100;      // internal CV repeats
  std::size_t cv_folds = 10;
  std::size_t k_min = 1, k_max = 20;        // curves: inversion sweep
  std::size_t folds_min = 5, folds_max = 20;  // curves: fold sweep
  std::size_t paired_iterations = 100;

  std::string data_path;    // real_data
  std::string schema_path;  // real_data
  std::size_t subset_cv_reps = 10;

  std::uint64_t master_seed = 0;
  std::string output_dir = ".";
  std::size_t threads = 0;

  static ExperimentSpec from_json_file(const std::string& path);
  std::string to_json() const;
};

CsvTable run_scenario_grid(const ExperimentSpec& spec);
CsvTable run_estimator_curves(const ExperimentSpec& spec);
CsvTable run_true_vs_intercept(const ExperimentSpec& spec);

struct SubsetSelection {
  std::vector<std::string> best_subset;  // variable names, empty = intercept-only
  CsvTable table;                        // one row per subset
};

SubsetSelection best_subset_select(const LoadedData& loaded, const ModelConfig& model,
                                   std::size_t folds, std::size_t cv_reps, std::uint64_t seed,
                                   std::size_t threads = 1);

// Three-row comparison (best / intercept-only / full) of -l_CV, p_cv and
// horizontal GDF at the given network configuration.
CsvTable real_data_compare(const LoadedData& loaded, const ModelConfig& model,
                           const std::vector<std::string>& best_subset, std::size_t folds,
                           std::size_t pcv_reps, std::size_t gdf_sweeps, std::uint64_t seed,
                           std::size_t threads = 1);

// Runs the spec end to end, writing one or more CSVs plus a JSON manifest
// into spec.output_dir. Returns the list of files written.
std::vector<std::string> run_experiment(const ExperimentSpec& spec);

}  // namespace dofnet
