#pragma once

#include <cstdint>
#include <vector>

#include "dofnet/matrix.hpp"
#include "dofnet/rng.hpp"

// Single-hidden-layer feed-forward network with logistic hidden and output
// activations, trained by minimizing a ridge-penalized fit criterion with a
// full-batch quasi-Newton (BFGS) optimizer.

namespace dofnet {

// Probabilities reported by the library are clamped to [kProbEps, 1-kProbEps]
// so Bernoulli log-likelihoods stay finite.
inline constexpr double kProbEps = 1e-12;

inline double clamp_prob(double p) {
  if (p < kProbEps) return kProbEps;
  if (p > 1.0 - kProbEps) return 1.0 - kProbEps;
  return p;
}

inline double expit(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// All network weights in a fixed flat layout: the H+1 output-layer weights
// (intercept v0 first), then the H hidden-unit rows, each p+1 long with the
// hidden intercept w_{j0} in column 0. Total length D = (p+2)H + 1.
class ParamVector {
 public:
  ParamVector() = default;
  ParamVector(std::size_t inputs, std::size_t hidden)
      : inputs_(inputs), hidden_(hidden), flat_(dim(inputs, hidden), 0.0) {}

  static std::size_t dim(std::size_t inputs, std::size_t hidden) {
    return (inputs + 2) * hidden + 1;
  }

  std::size_t inputs() const { return inputs_; }
  std::size_t hidden() const { return hidden_; }
  std::size_t size() const { return flat_.size(); }

  double& v(std::size_t j) { return flat_[j]; }                    // j in [0, H]
  double v(std::size_t j) const { return flat_[j]; }
  double& w(std::size_t j, std::size_t i) {                        // j in [1, H], i in [0, p]
    return flat_[hidden_ + 1 + (j - 1) * (inputs_ + 1) + i];
  }
  double w(std::size_t j, std::size_t i) const {
    return flat_[hidden_ + 1 + (j - 1) * (inputs_ + 1) + i];
  }
  const double* w_row(std::size_t j) const {
    return flat_.data() + hidden_ + 1 + (j - 1) * (inputs_ + 1);
  }

  std::vector<double>& flat() { return flat_; }
  const std::vector<double>& flat() const { return flat_; }

  static ParamVector from_flat(std::size_t inputs, std::size_t hidden,
                               std::vector<double> flat);

 private:
  std::size_t inputs_ = 0;
  std::size_t hidden_ = 0;
  std::vector<double> flat_;
};

enum class FitCriterion { entropy, least_squares };

struct ModelConfig {
  std::size_t hidden_units = 2;
  double decay = 0.0;
  FitCriterion criterion = FitCriterion::entropy;
  std::size_t max_iterations = 1000;
  double gradient_tolerance = 1e-8;
  double init_range = 0.7;
  std::uint64_t seed = 0;
  bool standardize_inputs = false;

  void validate() const;
};

struct FitResult {
  ParamVector theta_hat;
  std::vector<double> fitted;  // clamped probabilities
  double loglik = 0.0;         // in-sample Bernoulli log-likelihood
  double objective = 0.0;      // E + lambda * ||theta||^2 at theta_hat
  bool converged = false;
  std::size_t iterations = 0;
};

double forward(const ParamVector& theta, const std::vector<double>& x);
std::vector<double> predict_all(const ParamVector& theta, const Matrix& X);

double entropy_criterion(const std::vector<double>& y, const std::vector<double>& yhat);
double least_squares_criterion(const std::vector<double>& y, const std::vector<double>& yhat);

double penalized_objective(const ParamVector& theta, const Dataset& data,
                           const ModelConfig& config);
std::vector<double> gradient(const ParamVector& theta, const Dataset& data,
                             const ModelConfig& config);

ParamVector init_weights(std::size_t inputs, std::size_t hidden, double init_range, Rng& rng);

FitResult fit(const Dataset& data, const ModelConfig& config);

// Bernoulli log-likelihood of y under (already clamped) probabilities.
double bernoulli_loglik(const std::vector<double>& y, const std::vector<double>& yhat);

}  // namespace dofnet
