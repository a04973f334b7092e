#include "dofnet/data_gen.hpp"

#include <cmath>
#include <stdexcept>

namespace dofnet {

void ScenarioSpec::validate() const {
  if (n < 1) throw std::invalid_argument("ScenarioSpec: n must be >= 1");
  if (!(prevalence > 0.0 && prevalence < 1.0))
    throw std::invalid_argument("ScenarioSpec: prevalence must be in (0,1)");
  if (scenario == Scenario::mixed_inputs && !(m > 0 && m < p))
    throw std::invalid_argument("ScenarioSpec: mixed inputs require 0 < m < p");
}

void TrueModelSpec::validate() const {
  if (n < 1 || hidden < 1) throw std::invalid_argument("TrueModelSpec: n, hidden must be >= 1");
  if (!(weight_scale > 0.0)) throw std::invalid_argument("TrueModelSpec: weight_scale must be > 0");
}

Dataset gen_scenario(const ScenarioSpec& spec, Rng& rng) {
  spec.validate();
  Dataset d;
  d.y.resize(spec.n);
  d.X = Matrix(spec.n, spec.p);
  const std::size_t n_binary = spec.scenario == Scenario::binary_inputs ? spec.p
                               : spec.scenario == Scenario::mixed_inputs ? spec.m
                                                                         : 0;
  for (std::size_t k = 0; k < spec.n; ++k) {
    d.y[k] = rbernoulli(rng, spec.prevalence);
    for (std::size_t i = 0; i < spec.p; ++i)
      d.X(k, i) = i < n_binary ? rbernoulli(rng, 0.5) : rnorm(rng);
  }
  return d;
}

std::pair<Dataset, ParamVector> gen_true_model(const TrueModelSpec& spec, Rng& rng) {
  spec.validate();
  const double sd = std::sqrt(spec.weight_scale);
  ParamVector theta(spec.p, spec.hidden);
  theta.v(0) = 1.0;
  for (std::size_t j = 1; j <= spec.hidden; ++j) theta.v(j) = sd * rnorm(rng);
  for (std::size_t j = 1; j <= spec.hidden; ++j)
    for (std::size_t i = 0; i <= spec.p; ++i) theta.w(j, i) = sd * rnorm(rng);

  Dataset d;
  d.X = Matrix(spec.n, spec.p);
  d.y.resize(spec.n);
  std::vector<double> x(spec.p);
  for (std::size_t k = 0; k < spec.n; ++k) {
    for (std::size_t i = 0; i < spec.p; ++i) {
      x[i] = rnorm(rng);
      d.X(k, i) = x[i];
    }
    d.y[k] = rbernoulli(rng, forward(theta, x));
  }
  return {std::move(d), std::move(theta)};
}

Dataset gen_intercept_only(std::size_t n, std::size_t p, double prob, Rng& rng) {
  if (!(prob > 0.0 && prob < 1.0))
    throw std::invalid_argument("gen_intercept_only: prob must be in (0,1)");
  Dataset d;
  d.X = Matrix(n, p);
  d.y.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    d.y[k] = rbernoulli(rng, prob);
    for (std::size_t i = 0; i < p; ++i) d.X(k, i) = rnorm(rng);
  }
  return d;
}

}  // namespace dofnet
