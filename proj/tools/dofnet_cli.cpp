// dofnet command-line driver.
//
// Subcommands: gdf, pcv, nulldof, experiment, select, compare.
// Exit codes: 0 success, 2 bad arguments, 3 data error, 4 estimation failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dofnet/complexity.hpp"
#include "dofnet/data_gen.hpp"
#include "dofnet/experiments.hpp"
#include "dofnet/kernels.hpp"
#include "dofnet/procedure.hpp"
#include "dofnet/rng.hpp"

namespace {

using nlohmann::json;
using namespace dofnet;

constexpr int kExitOk = 0;
constexpr int kExitArgs = 2;
constexpr int kExitData = 3;
constexpr int kExitEstimation = 4;

// Thrown for problems with input data (files, schemas, generated responses).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOpts {
  int scenario = 0;                   // 0 = not set
  std::size_t n = 200, p = 2;
  std::size_t hidden = 2;
  double decay = 0.01;
  std::string data_path, schema_path;
  std::string oracle;                 // "", "identity", "constant"
  std::optional<std::uint64_t> seed;
  std::size_t threads = 0;
  std::string out;
};

void add_model_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--hidden", o.hidden, "Hidden units H")->check(CLI::PositiveNumber);
  cmd->add_option("--decay", o.decay, "Weight decay lambda")->check(CLI::NonNegativeNumber);
}

void add_source_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--scenario", o.scenario, "Null scenario (1, 2 or 3)")
      ->check(CLI::Range(1, 3));
  cmd->add_option("--n", o.n, "Sample size")->check(CLI::PositiveNumber);
  cmd->add_option("--p", o.p, "Covariate count")->check(CLI::NonNegativeNumber);
  cmd->add_option("--data", o.data_path, "CSV data file");
  cmd->add_option("--schema", o.schema_path, "JSON schema for --data");
}

void add_run_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = auto)");
  cmd->add_option("--out", o.out, "JSON result path");
}

// Builds the dataset for an estimator subcommand: scenario, file, or oracle
// placeholder covariates. Oracle responses are Bernoulli(0.5).
Dataset make_dataset(const CommonOpts& o, std::uint64_t seed) {
  if (!o.data_path.empty()) {
    if (o.schema_path.empty()) throw DataError("--data requires --schema");
    const RealDataSchema schema = RealDataSchema::from_json_file(o.schema_path);
    return load_csv(o.data_path, schema).data;
  }
  if (!o.oracle.empty()) {
    Rng rng(derive_seed(seed, 0xda7a));
    return gen_intercept_only(o.n, 0, 0.5, rng);
  }
  if (o.scenario == 0) throw CLI::ValidationError("one of --scenario, --data, --oracle required");
  ScenarioSpec spec;
  spec.scenario = o.scenario == 1   ? Scenario::binary_inputs
                  : o.scenario == 2 ? Scenario::continuous_inputs
                                    : Scenario::mixed_inputs;
  spec.n = o.n;
  spec.p = o.p;
  spec.m = o.scenario == 3 ? o.p / 2 : 0;
  Rng rng(derive_seed(seed, 0xda7a));
  return gen_scenario(spec, rng);
}

std::unique_ptr<ModelingProcedure> make_procedure(const CommonOpts& o) {
  if (o.oracle == "identity") return std::make_unique<IdentityProcedure>();
  if (o.oracle == "constant") return std::make_unique<ConstantMeanProcedure>();
  if (!o.oracle.empty()) throw CLI::ValidationError("--oracle must be identity or constant");
  ModelConfig cfg;
  cfg.hidden_units = o.hidden;
  cfg.decay = o.decay;
  return std::make_unique<FfnnProcedure>(cfg);
}

std::uint64_t require_seed(const CommonOpts& o) {
  if (o.seed) return *o.seed;
  if (!o.oracle.empty()) return 0;  // oracle runs are seed-insensitive
  throw CLI::RequiredError("--seed");
}

void write_result(const std::string& path, const json& j) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << j.dump(2) << "\n";
}

json flags_json(const CommonOpts& o, std::uint64_t seed) {
  json j;
  if (o.scenario) j["scenario"] = o.scenario;
  if (!o.data_path.empty()) j["data"] = o.data_path;
  if (!o.schema_path.empty()) j["schema"] = o.schema_path;
  if (!o.oracle.empty()) j["oracle"] = o.oracle;
  j["n"] = o.n;
  j["p"] = o.p;
  j["hidden"] = o.hidden;
  j["decay"] = o.decay;
  j["seed"] = seed;
  return j;
}

void print_estimate(const std::string& name, const ComplexityEstimate& e) {
  std::cout << name << " value=" << format_number(e.value)
            << " se=" << format_number(e.std_error) << " internal_reps=" << e.internal_reps
            << " discarded=" << e.discarded << "\n";
}

json estimate_json(const ComplexityEstimate& e) {
  json j;
  j["value"] = e.value;
  j["se"] = e.std_error;
  j["internal_reps"] = e.internal_reps;
  j["discarded"] = e.discarded;
  if (e.flips_per_step) j["k"] = e.flips_per_step;
  if (e.folds) j["folds"] = e.folds;
  if (e.sweep_columns) j["sweep_columns"] = e.sweep_columns;
  return j;
}

int run_gdf(const CommonOpts& o, const std::string& method, std::size_t k, std::size_t reps) {
  const std::uint64_t seed = require_seed(o);
  Dataset data;
  try {
    data = make_dataset(o, seed);
  } catch (const CLI::Error&) {
    throw;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  }
  try {
    const auto proc = make_procedure(o);
    ComplexityEstimate est;
    if (method == "vertical") {
      est = gdf_vertical(*proc, data, reps, derive_seed(seed, 1), o.threads);
    } else if (method == "horizontal") {
      const std::size_t kk = k > 0 ? k : default_flips(data.n());
      est = gdf_horizontal(*proc, data, kk, reps, derive_seed(seed, 1), o.threads);
    } else {
      throw CLI::ValidationError("--method must be vertical or horizontal");
    }
    print_estimate("gdf_" + method, est);
    json j;
    j["command"] = "gdf";
    j["method"] = method;
    j["flags"] = flags_json(o, seed);
    j["flags"]["k"] = k;
    j["flags"]["reps"] = reps;
    j["result"] = estimate_json(est);
    write_result(o.out, j);
    return kExitOk;
  } catch (const CLI::Error&) {
    throw;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "estimation error: " << e.what() << "\n";
    return kExitEstimation;
  }
}

int run_pcv(const CommonOpts& o, std::size_t folds, std::size_t reps) {
  const std::uint64_t seed = require_seed(o);
  Dataset data;
  try {
    data = make_dataset(o, seed);
  } catch (const CLI::Error&) {
    throw;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  }
  try {
    const auto proc = make_procedure(o);
    const ComplexityEstimate est = p_cv(*proc, data, folds, reps, derive_seed(seed, 1), o.threads);
    print_estimate("p_cv", est);
    json j;
    j["command"] = "pcv";
    j["flags"] = flags_json(o, seed);
    j["flags"]["folds"] = folds;
    j["flags"]["reps"] = reps;
    j["result"] = estimate_json(est);
    write_result(o.out, j);
    return kExitOk;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "estimation error: " << e.what() << "\n";
    return kExitEstimation;
  }
}

int run_nulldof(const CommonOpts& o, std::size_t reps) {
  const std::uint64_t seed = o.seed.value_or(0);
  try {
    if (o.scenario == 0) throw CLI::ValidationError("--scenario required for nulldof");
    ScenarioSpec spec;
    spec.scenario = o.scenario == 1   ? Scenario::binary_inputs
                    : o.scenario == 2 ? Scenario::continuous_inputs
                                      : Scenario::mixed_inputs;
    spec.n = o.n;
    spec.p = o.p;
    spec.m = o.scenario == 3 ? o.p / 2 : 0;
    const auto proc = make_procedure(o);
    const DataGenerator gen = [spec](Rng& rng) { return gen_scenario(spec, rng); };
    const ComplexityEstimate est = null_dof(*proc, gen, reps, derive_seed(seed, 1), o.threads);
    print_estimate("null_dof", est);
    json j;
    j["command"] = "nulldof";
    j["flags"] = flags_json(o, seed);
    j["flags"]["reps"] = reps;
    j["result"] = estimate_json(est);
    write_result(o.out, j);
    return kExitOk;
  } catch (const CLI::Error&) {
    throw;
  } catch (const std::exception& e) {
    std::cerr << "estimation error: " << e.what() << "\n";
    return kExitEstimation;
  }
}

int run_experiment_cmd(const std::string& spec_path, std::optional<std::uint64_t> seed,
                       const std::string& out_dir, std::size_t threads) {
  ExperimentSpec spec;
  try {
    spec = ExperimentSpec::from_json_file(spec_path);
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  }
  if (seed) spec.master_seed = *seed;
  if (!out_dir.empty()) spec.output_dir = out_dir;
  if (threads) spec.threads = threads;
  try {
    const auto files = run_experiment(spec);
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    return kExitOk;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "estimation error: " << e.what() << "\n";
    return kExitEstimation;
  }
}

int run_select(const CommonOpts& o, std::size_t folds, std::size_t reps,
               const std::string& table_path) {
  const std::uint64_t seed = require_seed(o);
  LoadedData loaded;
  try {
    if (o.data_path.empty() || o.schema_path.empty())
      throw CLI::ValidationError("select requires --data and --schema");
    loaded = load_csv(o.data_path, RealDataSchema::from_json_file(o.schema_path));
  } catch (const CLI::Error&) {
    throw;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  }
  try {
    ModelConfig cfg;
    cfg.hidden_units = o.hidden;
    cfg.decay = o.decay;
    const SubsetSelection sel =
        best_subset_select(loaded, cfg, folds, reps, derive_seed(seed, 1), o.threads);
    std::string name;
    for (const auto& v : sel.best_subset) name += (name.empty() ? "" : "+") + v;
    if (name.empty()) name = "(intercept)";
    std::cout << "best_subset " << name << "\n";
    if (!table_path.empty()) write_csv(table_path, sel.table);
    json j;
    j["command"] = "select";
    j["flags"] = flags_json(o, seed);
    j["flags"]["folds"] = folds;
    j["flags"]["reps"] = reps;
    j["best_subset"] = sel.best_subset;
    write_result(o.out, j);
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "estimation error: " << e.what() << "\n";
    return kExitEstimation;
  }
}

int run_compare(const CommonOpts& o, const std::vector<std::string>& subset, std::size_t folds,
                std::size_t reps, std::size_t sweeps, const std::string& table_path) {
  const std::uint64_t seed = require_seed(o);
  LoadedData loaded;
  try {
    if (o.data_path.empty() || o.schema_path.empty())
      throw CLI::ValidationError("compare requires --data and --schema");
    loaded = load_csv(o.data_path, RealDataSchema::from_json_file(o.schema_path));
  } catch (const CLI::Error&) {
    throw;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  }
  try {
    ModelConfig cfg;
    cfg.hidden_units = o.hidden;
    cfg.decay = o.decay;
    const CsvTable table = real_data_compare(loaded, cfg, subset, folds, reps, sweeps,
                                             derive_seed(seed, 1), o.threads);
    for (const auto& row : table.rows) {
      std::cout << row[0] << " subset=" << row[1] << " neg_lcv=" << row[4] << " (" << row[5]
                << ") pcv=" << row[6] << " (" << row[7] << ") gdf=" << row[8] << " (" << row[9]
                << ")\n";
    }
    if (!table_path.empty()) write_csv(table_path, table);
    json j;
    j["command"] = "compare";
    j["flags"] = flags_json(o, seed);
    j["flags"]["folds"] = folds;
    j["flags"]["reps"] = reps;
    j["flags"]["sweeps"] = sweeps;
    j["flags"]["subset"] = subset;
    j["rows"] = json::array();
    for (const auto& row : table.rows) {
      json r;
      for (std::size_t c = 0; c < table.header.size(); ++c) r[table.header[c]] = row[c];
      j["rows"].push_back(r);
    }
    write_result(o.out, j);
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "estimation error: " << e.what() << "\n";
    return kExitEstimation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dofnet: effective-complexity estimation for small feed-forward networks"};
  app.require_subcommand(1);

  CommonOpts o;

  auto* gdf = app.add_subcommand("gdf", "Generalized degrees of freedom");
  std::string method = "horizontal";
  std::size_t gdf_k = 0, gdf_reps = 20;
  add_source_flags(gdf, o);
  add_model_flags(gdf, o);
  add_run_flags(gdf, o);
  gdf->add_option("--method", method, "vertical or horizontal")
      ->check(CLI::IsMember({"vertical", "horizontal"}));
  gdf->add_option("--k", gdf_k, "Flips per perturbation (0 = 10% of n)");
  gdf->add_option("--reps", gdf_reps, "Sweeps (horizontal) or replicates (vertical)")
      ->check(CLI::PositiveNumber);
  gdf->add_option("--oracle", o.oracle, "identity or constant (bypasses the network)")
      ->check(CLI::IsMember({"identity", "constant"}));

  auto* pcv = app.add_subcommand("pcv", "Cross-validated effective number of parameters");
  std::size_t pcv_folds = 10, pcv_reps = 100;
  add_source_flags(pcv, o);
  add_model_flags(pcv, o);
  add_run_flags(pcv, o);
  pcv->add_option("--folds", pcv_folds, "CV folds K")->check(CLI::Range(2, 1000000));
  pcv->add_option("--reps", pcv_reps, "CV repetitions")->check(CLI::PositiveNumber);

  auto* nulldof = app.add_subcommand("nulldof", "Mean-LRT null degrees of freedom");
  std::size_t nd_reps = 50;
  add_source_flags(nulldof, o);
  add_model_flags(nulldof, o);
  add_run_flags(nulldof, o);
  nulldof->add_option("--reps", nd_reps, "Generated datasets")->check(CLI::PositiveNumber);

  auto* experiment = app.add_subcommand("experiment", "Run an experiment spec file");
  std::string spec_path, out_dir;
  std::optional<std::uint64_t> exp_seed;
  std::size_t exp_threads = 0;
  experiment->add_option("spec", spec_path, "JSON experiment spec")->required();
  experiment->add_option("--seed", exp_seed, "Master seed override");
  experiment->add_option("--out-dir", out_dir, "Output directory override");
  experiment->add_option("--threads", exp_threads, "Worker threads override");

  auto* select = app.add_subcommand("select", "Best-subset selection by CV log-likelihood");
  std::size_t sel_folds = 10, sel_reps = 10;
  std::string sel_table;
  add_source_flags(select, o);
  add_model_flags(select, o);
  add_run_flags(select, o);
  select->add_option("--folds", sel_folds, "CV folds K")->check(CLI::Range(2, 1000000));
  select->add_option("--reps", sel_reps, "CV repetitions per subset")->check(CLI::PositiveNumber);
  select->add_option("--table", sel_table, "Write the per-subset table CSV here");

  auto* compare = app.add_subcommand("compare", "Best / intercept-only / full model comparison");
  std::vector<std::string> cmp_subset;
  std::size_t cmp_folds = 10, cmp_reps = 100, cmp_sweeps = 100;
  std::string cmp_table;
  add_source_flags(compare, o);
  add_model_flags(compare, o);
  add_run_flags(compare, o);
  compare->add_option("--subset", cmp_subset, "Best-subset variable names")->delimiter(',');
  compare->add_option("--folds", cmp_folds, "CV folds K")->check(CLI::Range(2, 1000000));
  compare->add_option("--reps", cmp_reps, "CV repetitions")->check(CLI::PositiveNumber);
  compare->add_option("--sweeps", cmp_sweeps, "Horizontal GDF sweeps")->check(CLI::PositiveNumber);
  compare->add_option("--table", cmp_table, "Write the comparison table CSV here");

  try {
    app.parse(argc, argv);
    if (gdf->parsed()) return run_gdf(o, method, gdf_k, gdf_reps);
    if (pcv->parsed()) return run_pcv(o, pcv_folds, pcv_reps);
    if (nulldof->parsed()) return run_nulldof(o, nd_reps);
    if (experiment->parsed()) return run_experiment_cmd(spec_path, exp_seed, out_dir, exp_threads);
    if (select->parsed()) return run_select(o, sel_folds, sel_reps, sel_table);
    if (compare->parsed()) return run_compare(o, cmp_subset, cmp_folds, cmp_reps, cmp_sweeps,
                                              cmp_table);
    return kExitArgs;
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return kExitOk;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    std::cerr << app.help() << "\n";
    return kExitArgs;
  }
}
