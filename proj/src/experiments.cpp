#include "dofnet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

#include "dofnet/complexity.hpp"
#include "dofnet/data_gen.hpp"
#include "dofnet/kernels.hpp"
#include "dofnet/parallel.hpp"
#include "dofnet/procedure.hpp"
#include "dofnet/stats.hpp"

namespace dofnet {

using nlohmann::json;

namespace {

ColumnKind parse_kind(const std::string& s) {
  if (s == "numeric") return ColumnKind::numeric;
  if (s == "binary-factor") return ColumnKind::binary_factor;
  if (s == "factor") return ColumnKind::factor;
  if (s == "ordered-count") return ColumnKind::ordered_count;
  throw std::runtime_error("schema: unknown column kind '" + s + "'");
}

Scenario parse_scenario(int s) {
  switch (s) {
    case 1: return Scenario::binary_inputs;
    case 2: return Scenario::continuous_inputs;
    case 3: return Scenario::mixed_inputs;
    default: throw std::invalid_argument("scenario must be 1, 2 or 3");
  }
}

std::pair<double, double> mean_se_or_zero(const std::vector<double>& v) {
  if (v.size() < 2) return {v.empty() ? 0.0 : v[0], 0.0};
  return mean_se(v);
}

template <typename T>
std::vector<T> json_list(const json& j, const std::string& key, std::vector<T> fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

}  // namespace

RealDataSchema RealDataSchema::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schema file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("schema parse error in " + path + ": " + e.what());
  }
  RealDataSchema schema;
  schema.response_column = j.at("response").at("column").get<std::string>();
  schema.response_positive_level = j.at("response").at("positive_level").get<std::string>();
  for (const auto& c : j.at("covariates")) {
    ColumnSpec spec;
    spec.column = c.at("column").get<std::string>();
    spec.kind = parse_kind(c.at("kind").get<std::string>());
    if (c.contains("levels")) spec.levels = c.at("levels").get<std::vector<std::string>>();
    if (c.contains("reference_level"))
      spec.reference_level = c.at("reference_level").get<std::string>();
    if (spec.kind != ColumnKind::numeric && spec.levels.empty())
      throw std::runtime_error("schema: column '" + spec.column + "' needs declared levels");
    schema.covariates.push_back(std::move(spec));
  }
  return schema;
}

namespace {

std::size_t level_index(const ColumnSpec& spec, const std::string& value, std::size_t row) {
  for (std::size_t i = 0; i < spec.levels.size(); ++i)
    if (spec.levels[i] == value) return i;
  throw std::runtime_error("data row " + std::to_string(row + 2) + ", column '" + spec.column +
                           "': unknown level '" + value + "'");
}

double parse_numeric(const std::string& value, const std::string& column, std::size_t row) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("data row " + std::to_string(row + 2) + ", column '" + column +
                             "': non-numeric cell '" + value + "'");
  }
}

}  // namespace

LoadedData load_csv(const std::string& path, const RealDataSchema& schema) {
  const CsvTable table = read_csv(path);
  const std::size_t n = table.rows.size();
  const std::size_t resp_col = table.column_index(schema.response_column);

  LoadedData out;
  out.data.y.resize(n);
  for (std::size_t r = 0; r < n; ++r)
    out.data.y[r] = table.rows[r][resp_col] == schema.response_positive_level ? 1.0 : 0.0;

  // Plan encoded columns first.
  struct Encoded {
    const ColumnSpec* spec;
    std::size_t src_col;
    std::size_t dummy_level;  // factor kinds: the level this dummy indicates
    std::string name;
  };
  std::vector<Encoded> plan;
  for (std::size_t v = 0; v < schema.covariates.size(); ++v) {
    const ColumnSpec& spec = schema.covariates[v];
    const std::size_t src = table.column_index(spec.column);
    out.variable_names.push_back(spec.column);
    switch (spec.kind) {
      case ColumnKind::numeric:
      case ColumnKind::ordered_count:
        plan.push_back({&spec, src, 0, spec.column});
        out.feature_group.push_back(v);
        break;
      case ColumnKind::binary_factor: {
        plan.push_back({&spec, src, 0, spec.column});
        out.feature_group.push_back(v);
        break;
      }
      case ColumnKind::factor: {
        const std::string ref =
            spec.reference_level.empty() ? spec.levels.front() : spec.reference_level;
        for (std::size_t l = 0; l < spec.levels.size(); ++l) {
          if (spec.levels[l] == ref) continue;
          plan.push_back({&spec, src, l, spec.column + "." + spec.levels[l]});
          out.feature_group.push_back(v);
        }
        break;
      }
    }
  }

  out.data.X = Matrix(n, plan.size());
  for (std::size_t c = 0; c < plan.size(); ++c) {
    const Encoded& enc = plan[c];
    out.feature_names.push_back(enc.name);
    for (std::size_t r = 0; r < n; ++r) {
      const std::string& cell = table.rows[r][enc.src_col];
      double value = 0.0;
      switch (enc.spec->kind) {
        case ColumnKind::numeric:
          value = parse_numeric(cell, enc.spec->column, r);
          break;
        case ColumnKind::ordered_count:
          value = static_cast<double>(level_index(*enc.spec, cell, r));
          break;
        case ColumnKind::binary_factor: {
          const std::size_t idx = level_index(*enc.spec, cell, r);
          const std::string ref = enc.spec->reference_level.empty()
                                      ? enc.spec->levels.front()
                                      : enc.spec->reference_level;
          value = enc.spec->levels[idx] == ref ? 0.0 : 1.0;
          break;
        }
        case ColumnKind::factor:
          value = level_index(*enc.spec, cell, r) == enc.dummy_level ? 1.0 : 0.0;
          break;
      }
      out.data.X(r, c) = value;
    }
  }
  out.data.validate();
  return out;
}

ExperimentSpec ExperimentSpec::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open experiment spec: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("experiment spec parse error in " + path + ": " + e.what());
  }

  ExperimentSpec spec;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "scenario_grid")
    spec.kind = ExperimentKind::scenario_grid;
  else if (kind == "estimator_curves")
    spec.kind = ExperimentKind::estimator_curves;
  else if (kind == "true_vs_intercept")
    spec.kind = ExperimentKind::true_vs_intercept;
  else if (kind == "real_data")
    spec.kind = ExperimentKind::real_data;
  else
    throw std::runtime_error("unknown experiment kind '" + kind + "'");

  spec.scenarios = json_list<int>(j, "scenarios", spec.scenarios);
  spec.ns = json_list<std::size_t>(j, "n", spec.ns);
  spec.ps = json_list<std::size_t>(j, "p", spec.ps);
  spec.hiddens = json_list<std::size_t>(j, "hidden", spec.hiddens);
  spec.decays = json_list<double>(j, "decay", spec.decays);
  spec.prevalence = j.value("prevalence", spec.prevalence);
  spec.intercept_prob = j.value("intercept_prob", spec.intercept_prob);
  spec.external_reps = j.value("external_reps", spec.external_reps);
  spec.gdf_sweeps = j.value("gdf_sweeps", spec.gdf_sweeps);
  spec.vertical_reps = j.value("vertical_reps", spec.vertical_reps);
  spec.pcv_reps = j.value("pcv_reps", spec.pcv_reps);
  spec.cv_folds = j.value("folds", spec.cv_folds);
  spec.k_min = j.value("k_min", spec.k_min);
  spec.k_max = j.value("k_max", spec.k_max);
  spec.folds_min = j.value("folds_min", spec.folds_min);
  spec.folds_max = j.value("folds_max", spec.folds_max);
  spec.paired_iterations = j.value("paired_iterations", spec.paired_iterations);
  spec.data_path = j.value("data_path", spec.data_path);
  spec.schema_path = j.value("schema_path", spec.schema_path);
  spec.subset_cv_reps = j.value("subset_cv_reps", spec.subset_cv_reps);
  spec.master_seed = j.value("master_seed", spec.master_seed);
  spec.output_dir = j.value("output_dir", spec.output_dir);
  spec.threads = j.value("threads", spec.threads);

  if (spec.external_reps < 1) throw std::runtime_error("external_reps must be >= 1");
  if (spec.ns.empty() || spec.ps.empty() || spec.hiddens.empty() || spec.decays.empty())
    throw std::runtime_error("experiment grids must be non-empty");
  return spec;
}

std::string ExperimentSpec::to_json() const {
  json j;
  switch (kind) {
    case ExperimentKind::scenario_grid: j["kind"] = "scenario_grid"; break;
    case ExperimentKind::estimator_curves: j["kind"] = "estimator_curves"; break;
    case ExperimentKind::true_vs_intercept: j["kind"] = "true_vs_intercept"; break;
    case ExperimentKind::real_data: j["kind"] = "real_data"; break;
  }
  j["scenarios"] = scenarios;
  j["n"] = ns;
  j["p"] = ps;
  j["hidden"] = hiddens;
  j["decay"] = decays;
  j["prevalence"] = prevalence;
  j["intercept_prob"] = intercept_prob;
  j["external_reps"] = external_reps;
  j["gdf_sweeps"] = gdf_sweeps;
  j["vertical_reps"] = vertical_reps;
  j["pcv_reps"] = pcv_reps;
  j["folds"] = cv_folds;
  j["k_min"] = k_min;
  j["k_max"] = k_max;
  j["folds_min"] = folds_min;
  j["folds_max"] = folds_max;
  j["paired_iterations"] = paired_iterations;
  if (!data_path.empty()) j["data_path"] = data_path;
  if (!schema_path.empty()) j["schema_path"] = schema_path;
  j["subset_cv_reps"] = subset_cv_reps;
  j["master_seed"] = master_seed;
  j["output_dir"] = output_dir;
  j["threads"] = threads;
  return j.dump(2);
}

namespace {

ModelConfig cell_model(std::size_t hidden, double decay) {
  ModelConfig cfg;
  cfg.hidden_units = hidden;
  cfg.decay = decay;
  cfg.criterion = FitCriterion::entropy;
  return cfg;
}

ScenarioSpec cell_scenario(int scenario, std::size_t n, std::size_t p, double prevalence) {
  ScenarioSpec s;
  s.scenario = parse_scenario(scenario);
  s.n = n;
  s.p = p;
  s.m = s.scenario == Scenario::mixed_inputs ? p / 2 : 0;  // half binary, half continuous
  s.prevalence = prevalence;
  return s;
}

}  // namespace

CsvTable run_scenario_grid(const ExperimentSpec& spec) {
  CsvTable out;
  out.header = {"scenario", "n",        "p",      "hidden",  "decay",   "k",
                "lrt_mean", "lrt_se",   "gdf_mean", "gdf_se", "pcv_mean", "pcv_se",
                "reps",     "failures"};

  std::size_t cell = 0;
  for (int scenario : spec.scenarios) {
    for (std::size_t n : spec.ns) {
      for (std::size_t p : spec.ps) {
        for (std::size_t hidden : spec.hiddens) {
          for (double decay : spec.decays) {
            ++cell;
            const ScenarioSpec sspec = cell_scenario(scenario, n, p, spec.prevalence);
            const FfnnProcedure proc(cell_model(hidden, decay));
            const std::size_t k = default_flips(n);

            std::vector<double> lrt_v(spec.external_reps), gdf_v(spec.external_reps),
                pcv_v(spec.external_reps);
            std::vector<char> ok(spec.external_reps, 0);
            parallel_for(spec.external_reps, spec.threads, [&](std::size_t e) {
              try {
                Rng data_rng(derive_seed(spec.master_seed, cell, e, 1));
                const Dataset d = gen_scenario(sspec, data_rng);
                if (d.n1() == 0 || d.n0() == 0) {
                  lrt_v[e] = 0.0;
                  gdf_v[e] = 0.0;
                  pcv_v[e] = 0.0;
                  ok[e] = 1;
                  return;
                }
                const auto full = proc.fit(d.X, d.y, derive_seed(spec.master_seed, cell, e, 2));
                lrt_v[e] = lrt_statistic(d.y, full->fitted());
                gdf_v[e] = gdf_horizontal(proc, d, k, spec.gdf_sweeps,
                                          derive_seed(spec.master_seed, cell, e, 3), 1)
                               .value;
                pcv_v[e] = p_cv(proc, d, spec.cv_folds, spec.pcv_reps,
                                derive_seed(spec.master_seed, cell, e, 4), 1)
                               .value;
                ok[e] = 1;
              } catch (const std::exception& ex) {
                std::cerr << "[dofnet] grid cell " << cell << " replicate " << e
                          << " failed: " << ex.what() << "\n";
              }
            });

            std::vector<double> lrt_k, gdf_k, pcv_k;
            for (std::size_t e = 0; e < spec.external_reps; ++e) {
              if (!ok[e]) continue;
              lrt_k.push_back(lrt_v[e]);
              gdf_k.push_back(gdf_v[e]);
              pcv_k.push_back(pcv_v[e]);
            }
            const auto [lm, ls] = mean_se_or_zero(lrt_k);
            const auto [gm, gs] = mean_se_or_zero(gdf_k);
            const auto [pm, psd] = mean_se_or_zero(pcv_k);
            out.rows.push_back({std::to_string(scenario), std::to_string(n), std::to_string(p),
                                std::to_string(hidden), format_number(decay), std::to_string(k),
                                format_number(lm), format_number(ls), format_number(gm),
                                format_number(gs), format_number(pm), format_number(psd),
                                std::to_string(lrt_k.size()),
                                std::to_string(spec.external_reps - lrt_k.size())});
          }
        }
      }
    }
  }
  return out;
}

CsvTable run_estimator_curves(const ExperimentSpec& spec) {
  CsvTable out;
  out.header = {"estimator", "param", "mean", "se", "reps"};

  const int scenario = spec.scenarios.front();
  const std::size_t n = spec.ns.front(), p = spec.ps.front(), hidden = spec.hiddens.front();
  const double decay = spec.decays.front();
  const ScenarioSpec sspec = cell_scenario(scenario, n, p, spec.prevalence);
  const FfnnProcedure proc(cell_model(hidden, decay));

  // One dataset per external replicate, shared by every curve point.
  std::vector<Dataset> datasets;
  datasets.reserve(spec.external_reps);
  for (std::size_t e = 0; e < spec.external_reps; ++e) {
    Rng rng(derive_seed(spec.master_seed, 7, e, 1));
    datasets.push_back(gen_scenario(sspec, rng));
  }

  auto sweep_point = [&](const std::string& name, std::size_t param,
                         auto&& estimate_fn) {
    std::vector<double> vals(spec.external_reps);
    std::vector<char> ok(spec.external_reps, 0);
    parallel_for(spec.external_reps, spec.threads, [&](std::size_t e) {
      try {
        vals[e] = estimate_fn(datasets[e], e);
        ok[e] = 1;
      } catch (const std::exception& ex) {
        std::cerr << "[dofnet] curves " << name << " param " << param << " replicate " << e
                  << " failed: " << ex.what() << "\n";
      }
    });
    std::vector<double> kept;
    for (std::size_t e = 0; e < spec.external_reps; ++e)
      if (ok[e]) kept.push_back(vals[e]);
    const auto [m, s] = mean_se_or_zero(kept);
    out.rows.push_back({name, std::to_string(param), format_number(m), format_number(s),
                        std::to_string(kept.size())});
  };

  for (std::size_t k = spec.k_min; k <= spec.k_max; ++k) {
    sweep_point("gdf_horizontal", k, [&](const Dataset& d, std::size_t e) {
      return gdf_horizontal(proc, d, k, spec.gdf_sweeps,
                            derive_seed(spec.master_seed, 11, e, k), 1)
          .value;
    });
  }
  sweep_point("gdf_vertical", 1, [&](const Dataset& d, std::size_t e) {
    return gdf_vertical(proc, d, spec.vertical_reps, derive_seed(spec.master_seed, 13, e), 1)
        .value;
  });
  for (std::size_t K = spec.folds_min; K <= spec.folds_max; ++K) {
    sweep_point("p_cv", K, [&](const Dataset& d, std::size_t e) {
      return p_cv(proc, d, K, spec.pcv_reps, derive_seed(spec.master_seed, 17, e, K), 1).value;
    });
  }
  return out;
}

CsvTable run_true_vs_intercept(const ExperimentSpec& spec) {
  CsvTable out;
  out.header = {"n",          "p",          "hidden",       "decay",
                "iterations", "gdf_true",   "gdf_int",      "dgdf_center",
                "dgdf_hw",    "pcv_true",   "pcv_int",      "dpcv_center",
                "dpcv_hw"};

  std::size_t cell = 0;
  for (std::size_t n : spec.ns) {
    for (std::size_t p : spec.ps) {
      for (std::size_t hidden : spec.hiddens) {
        for (double decay : spec.decays) {
          ++cell;
          PairedDeltaConfig cfg;
          TrueModelSpec tspec;
          tspec.n = n;
          tspec.p = p;
          tspec.hidden = hidden;
          tspec.weight_scale = 1.0;
          cfg.gen_a = [tspec](Rng& rng) { return gen_true_model(tspec, rng).first; };
          const double prob = spec.intercept_prob;
          cfg.gen_b = [n, p, prob](Rng& rng) { return gen_intercept_only(n, p, prob, rng); };
          cfg.model = cell_model(hidden, decay);
          cfg.gdf_flips = default_flips(n);
          cfg.gdf_sweeps = spec.gdf_sweeps;
          cfg.cv_folds = spec.cv_folds;
          cfg.cv_reps = spec.pcv_reps;
          cfg.threads = spec.threads;

          const auto [dgdf, dpcv] = paired_delta_run(cfg, spec.paired_iterations,
                                                     derive_seed(spec.master_seed, cell));
          const auto [gdf_ci_c, gdf_ci_hw] = paired_t_ci(dgdf, 0.95);
          const auto [pcv_ci_c, pcv_ci_hw] = paired_t_ci(dpcv, 0.95);
          const auto [gdf_true_m, gdf_true_s] = mean_se_or_zero(dgdf.arm_a);
          const auto [gdf_int_m, gdf_int_s] = mean_se_or_zero(dgdf.arm_b);
          const auto [pcv_true_m, pcv_true_s] = mean_se_or_zero(dpcv.arm_a);
          const auto [pcv_int_m, pcv_int_s] = mean_se_or_zero(dpcv.arm_b);
          (void)gdf_true_s; (void)gdf_int_s; (void)pcv_true_s; (void)pcv_int_s;
          out.rows.push_back({std::to_string(n), std::to_string(p), std::to_string(hidden),
                              format_number(decay), std::to_string(dgdf.diffs.size()),
                              format_number(gdf_true_m), format_number(gdf_int_m),
                              format_number(gdf_ci_c), format_number(gdf_ci_hw),
                              format_number(pcv_true_m), format_number(pcv_int_m),
                              format_number(pcv_ci_c), format_number(pcv_ci_hw)});
        }
      }
    }
  }
  return out;
}

namespace {

// Encoded column indices for a set of variables (by variable index).
std::vector<std::size_t> columns_for(const LoadedData& loaded, std::uint32_t mask) {
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < loaded.feature_group.size(); ++c)
    if (mask & (1u << loaded.feature_group[c])) cols.push_back(c);
  return cols;
}

std::string subset_name(const LoadedData& loaded, std::uint32_t mask) {
  std::string name;
  for (std::size_t v = 0; v < loaded.variable_names.size(); ++v) {
    if (!(mask & (1u << v))) continue;
    if (!name.empty()) name += "+";
    name += loaded.variable_names[v];
  }
  return name.empty() ? "(intercept)" : name;
}

}  // namespace

SubsetSelection best_subset_select(const LoadedData& loaded, const ModelConfig& model,
                                   std::size_t folds, std::size_t cv_reps, std::uint64_t seed,
                                   std::size_t threads) {
  const std::size_t q = loaded.variable_names.size();
  if (q > 20) throw std::invalid_argument("best_subset_select: more than 20 candidate variables");
  const std::uint32_t n_subsets = 1u << q;

  struct Row {
    double mean = 0.0, se = 0.0;
    bool failed = false;
  };
  std::vector<Row> rows(n_subsets);
  const FfnnProcedure proc(model);

  parallel_for(n_subsets, threads, [&](std::size_t mask) {
    Dataset sub{loaded.data.X.take_cols(columns_for(loaded, static_cast<std::uint32_t>(mask))),
                loaded.data.y};
    try {
      const CvReplicates reps = cv_replicates(proc, sub, folds, cv_reps, seed, 1);
      const auto [m, s] = mean_se_or_zero(reps.neg_lcv);
      rows[mask] = {m, s, false};
    } catch (const std::exception& ex) {
      std::cerr << "[dofnet] subset '" << subset_name(loaded, static_cast<std::uint32_t>(mask))
                << "' failed: " << ex.what() << "\n";
      rows[mask].failed = true;
    }
  });

  // Argmin with ties broken by smaller subset then lexicographic mask order.
  std::int64_t best = -1;
  for (std::uint32_t mask = 0; mask < n_subsets; ++mask) {
    if (rows[mask].failed) continue;
    if (best < 0) {
      best = mask;
      continue;
    }
    const auto size = [](std::uint32_t m) { return __builtin_popcount(m); };
    const Row& cand = rows[mask];
    const Row& cur = rows[static_cast<std::uint32_t>(best)];
    if (cand.mean < cur.mean ||
        (cand.mean == cur.mean && size(mask) < size(static_cast<std::uint32_t>(best))))
      best = mask;
  }
  if (best < 0) throw std::runtime_error("best_subset_select: every subset failed");

  SubsetSelection sel;
  sel.table.header = {"subset", "size", "neg_lcv_mean", "neg_lcv_se", "failed"};
  for (std::uint32_t mask = 0; mask < n_subsets; ++mask) {
    sel.table.rows.push_back({subset_name(loaded, mask),
                              std::to_string(__builtin_popcount(mask)),
                              rows[mask].failed ? "nan" : format_number(rows[mask].mean),
                              rows[mask].failed ? "nan" : format_number(rows[mask].se),
                              rows[mask].failed ? "1" : "0"});
  }
  for (std::size_t v = 0; v < q; ++v)
    if (static_cast<std::uint32_t>(best) & (1u << v))
      sel.best_subset.push_back(loaded.variable_names[v]);
  return sel;
}

CsvTable real_data_compare(const LoadedData& loaded, const ModelConfig& model,
                           const std::vector<std::string>& best_subset, std::size_t folds,
                           std::size_t pcv_reps, std::size_t gdf_sweeps, std::uint64_t seed,
                           std::size_t threads) {
  std::uint32_t best_mask = 0;
  for (const std::string& name : best_subset) {
    const auto it =
        std::find(loaded.variable_names.begin(), loaded.variable_names.end(), name);
    if (it == loaded.variable_names.end())
      throw std::invalid_argument("real_data_compare: unknown variable '" + name + "'");
    best_mask |= 1u << (it - loaded.variable_names.begin());
  }
  const std::uint32_t full_mask = (1u << loaded.variable_names.size()) - 1u;

  CsvTable out;
  out.header = {"model",  "subset",  "hidden",   "decay",  "neg_lcv_mean", "neg_lcv_se",
                "pcv_mean", "pcv_se", "gdf_mean", "gdf_se"};
  const FfnnProcedure proc(model);
  const std::size_t k = default_flips(loaded.data.n());

  const std::vector<std::pair<std::string, std::uint32_t>> models = {
      {"B", best_mask}, {"I", 0u}, {"F", full_mask}};
  for (const auto& [label, mask] : models) {
    Dataset sub{loaded.data.X.take_cols(columns_for(loaded, mask)), loaded.data.y};
    const CvReplicates reps =
        cv_replicates(proc, sub, folds, pcv_reps, derive_seed(seed, mask, 1), threads);
    const auto [nm, ns_] = mean_se_or_zero(reps.neg_lcv);
    const auto [pm, ps_] = mean_se_or_zero(reps.p_cv_values);
    const ComplexityEstimate gdf =
        gdf_horizontal(proc, sub, k, gdf_sweeps, derive_seed(seed, mask, 2), threads);
    out.rows.push_back({label, subset_name(loaded, mask), std::to_string(model.hidden_units),
                        format_number(model.decay), format_number(nm), format_number(ns_),
                        format_number(pm), format_number(ps_), format_number(gdf.value),
                        format_number(gdf.std_error)});
  }
  return out;
}

std::vector<std::string> run_experiment(const ExperimentSpec& spec) {
  namespace fs = std::filesystem;
  fs::create_directories(spec.output_dir);
  std::vector<std::string> written;

  auto emit = [&](const std::string& name, const CsvTable& table) {
    const std::string path = (fs::path(spec.output_dir) / name).string();
    write_csv(path, table);
    written.push_back(path);
  };

  switch (spec.kind) {
    case ExperimentKind::scenario_grid:
      emit("scenario_grid.csv", run_scenario_grid(spec));
      break;
    case ExperimentKind::estimator_curves:
      emit("estimator_curves.csv", run_estimator_curves(spec));
      break;
    case ExperimentKind::true_vs_intercept:
      emit("true_vs_intercept.csv", run_true_vs_intercept(spec));
      break;
    case ExperimentKind::real_data: {
      if (spec.data_path.empty() || spec.schema_path.empty())
        throw std::runtime_error("real_data experiment requires data_path and schema_path");
      const RealDataSchema schema = RealDataSchema::from_json_file(spec.schema_path);
      const LoadedData loaded = load_csv(spec.data_path, schema);

      CsvTable selection;
      selection.header = {"hidden", "decay", "subset", "size", "neg_lcv_mean", "neg_lcv_se",
                          "failed"};
      CsvTable compare;
      std::size_t cell = 0;
      for (std::size_t hidden : spec.hiddens) {
        for (double decay : spec.decays) {
          ++cell;
          const ModelConfig model = cell_model(hidden, decay);
          const SubsetSelection sel =
              best_subset_select(loaded, model, spec.cv_folds, spec.subset_cv_reps,
                                 derive_seed(spec.master_seed, cell, 1), spec.threads);
          for (const auto& row : sel.table.rows) {
            std::vector<std::string> r = {std::to_string(hidden), format_number(decay)};
            r.insert(r.end(), row.begin(), row.end());
            selection.rows.push_back(std::move(r));
          }
          const CsvTable cmp = real_data_compare(loaded, model, sel.best_subset, spec.cv_folds,
                                                 spec.pcv_reps, spec.gdf_sweeps,
                                                 derive_seed(spec.master_seed, cell, 2),
                                                 spec.threads);
          if (compare.header.empty()) compare.header = cmp.header;
          for (const auto& row : cmp.rows) compare.rows.push_back(row);
        }
      }
      emit("subset_selection.csv", selection);
      emit("model_compare.csv", compare);
      break;
    }
  }

  // Manifest holds everything needed to reproduce the run. Timing and other
  // run-varying facts go to stderr so reruns produce identical bytes.
  json manifest;
  ExperimentSpec echo = spec;
  echo.threads = 0;  // worker count never changes results; keep reruns byte-identical
  manifest["spec"] = json::parse(echo.to_json());
  manifest["master_seed"] = spec.master_seed;
  manifest["library"] = "dofnet";
  manifest["version"] = "0.1.0";
  manifest["kernel_isa"] = kernels::isa_name(kernels::active_isa());
  {
    std::vector<std::string> names;
    for (const auto& p : written) names.push_back(fs::path(p).filename().string());
    manifest["outputs"] = names;
  }
  const std::string mpath = (fs::path(spec.output_dir) / "manifest.json").string();
  std::ofstream mout(mpath, std::ios::binary);
  mout << manifest.dump(2) << "\n";
  written.push_back(mpath);
  return written;
}

}  // namespace dofnet
