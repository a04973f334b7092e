#include "dofnet/procedure.hpp"

#include <numeric>
#include <stdexcept>

namespace dofnet {

namespace {

class FfnnFitted final : public FittedModel {
 public:
  explicit FfnnFitted(FitResult res) : res_(std::move(res)) {}
  const std::vector<double>& fitted() const override { return res_.fitted; }
  double loglik() const override { return res_.loglik; }
  std::vector<double> predict(const Matrix& X) const override {
    return predict_all(res_.theta_hat, X);
  }

 private:
  FitResult res_;
};

class ConstantFitted final : public FittedModel {
 public:
  ConstantFitted(double mean, std::size_t n, double ll)
      : mean_(mean), fitted_(n, mean), ll_(ll) {}
  const std::vector<double>& fitted() const override { return fitted_; }
  double loglik() const override { return ll_; }
  std::vector<double> predict(const Matrix& X) const override {
    return std::vector<double>(X.rows(), mean_);
  }

 private:
  double mean_;
  std::vector<double> fitted_;
  double ll_;
};

class IdentityFitted final : public FittedModel {
 public:
  IdentityFitted(std::vector<double> fitted, double ll)
      : fitted_(std::move(fitted)), ll_(ll) {}
  const std::vector<double>& fitted() const override { return fitted_; }
  double loglik() const override { return ll_; }
  std::vector<double> predict(const Matrix&) const override {
    throw std::logic_error("identity oracle has no out-of-sample predictions");
  }

 private:
  std::vector<double> fitted_;
  double ll_;
};

}  // namespace

std::unique_ptr<FittedModel> FfnnProcedure::fit(const Matrix& X, const std::vector<double>& y,
                                                std::uint64_t seed) const {
  Dataset d{X, y};
  ModelConfig cfg = config_;
  cfg.seed = seed;
  return std::make_unique<FfnnFitted>(dofnet::fit(d, cfg));
}

std::unique_ptr<FittedModel> ConstantMeanProcedure::fit(const Matrix&,
                                                        const std::vector<double>& y,
                                                        std::uint64_t) const {
  if (y.empty()) throw std::invalid_argument("constant-mean: empty response");
  const double mean =
      clamp_prob(std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size()));
  std::vector<double> fitted(y.size(), mean);
  return std::make_unique<ConstantFitted>(mean, y.size(), bernoulli_loglik(y, fitted));
}

std::unique_ptr<FittedModel> IdentityProcedure::fit(const Matrix&, const std::vector<double>& y,
                                                    std::uint64_t) const {
  std::vector<double> fitted(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) fitted[i] = clamp_prob(y[i]);
  const double ll = bernoulli_loglik(y, fitted);
  return std::make_unique<IdentityFitted>(std::move(fitted), ll);
}

}  // namespace dofnet
