#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dofnet/ffnn.hpp"
#include "dofnet/matrix.hpp"

// A modeling procedure maps a binary response vector (with the covariates
// held fixed) to fitted probabilities. Complexity estimators only see this
// interface, so oracles and the network share the same code paths.

namespace dofnet {

class FittedModel {
 public:
  virtual ~FittedModel() = default;
  // In-sample fitted probabilities, clamped to [kProbEps, 1-kProbEps].
  virtual const std::vector<double>& fitted() const = 0;
  // In-sample Bernoulli log-likelihood of the training response.
  virtual double loglik() const = 0;
  // Predictions on new rows; throws for procedures without out-of-sample form.
  virtual std::vector<double> predict(const Matrix& X) const = 0;
};

class ModelingProcedure {
 public:
  virtual ~ModelingProcedure() = default;
  virtual std::unique_ptr<FittedModel> fit(const Matrix& X, const std::vector<double>& y,
                                           std::uint64_t seed) const = 0;
  virtual std::string name() const = 0;
};

// Wraps dofnet::fit; the per-call seed overrides the config's.
class FfnnProcedure final : public ModelingProcedure {
 public:
  explicit FfnnProcedure(ModelConfig config) : config_(config) {}
  std::unique_ptr<FittedModel> fit(const Matrix& X, const std::vector<double>& y,
                                   std::uint64_t seed) const override;
  std::string name() const override { return "ffnn"; }
  const ModelConfig& config() const { return config_; }

 private:
  ModelConfig config_;
};

// yhat_i = mean(y) for every i.
class ConstantMeanProcedure final : public ModelingProcedure {
 public:
  std::unique_ptr<FittedModel> fit(const Matrix& X, const std::vector<double>& y,
                                   std::uint64_t seed) const override;
  std::string name() const override { return "constant-mean"; }
};

// yhat_i = clamp(y_i); in-sample only.
class IdentityProcedure final : public ModelingProcedure {
 public:
  std::unique_ptr<FittedModel> fit(const Matrix& X, const std::vector<double>& y,
                                   std::uint64_t seed) const override;
  std::string name() const override { return "identity"; }
};

}  // namespace dofnet
