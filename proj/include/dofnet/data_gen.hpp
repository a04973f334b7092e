#pragma once

#include "dofnet/ffnn.hpp"
#include "dofnet/matrix.hpp"
#include "dofnet/rng.hpp"

// Synthetic data generators for the null-hypothesis scenarios and the
// true-model / intercept-only comparison study. Response and covariates are
// independent in all null generators.

namespace dofnet {

enum class Scenario { binary_inputs, continuous_inputs, mixed_inputs };

struct ScenarioSpec {
  Scenario scenario = Scenario::binary_inputs;
  std::size_t n = 200;
  std::size_t p = 2;
  std::size_t m = 0;         // binary input count, mixed scenario only
  double prevalence = 0.3;

  void validate() const;
};

struct TrueModelSpec {
  std::size_t n = 200;
  std::size_t p = 3;
  std::size_t hidden = 5;
  double weight_scale = 1.0;  // s

  void validate() const;
};

Dataset gen_scenario(const ScenarioSpec& spec, Rng& rng);

// Draws theta_true (v0 = 1, everything else N(0, s)), X ~ N(0,1), and
// y_k ~ Bernoulli(forward(theta_true, x_k)). Degenerate responses are
// returned as-is.
std::pair<Dataset, ParamVector> gen_true_model(const TrueModelSpec& spec, Rng& rng);

Dataset gen_intercept_only(std::size_t n, std::size_t p, double prob, Rng& rng);

}  // namespace dofnet
