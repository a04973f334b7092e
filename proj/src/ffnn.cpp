#include "dofnet/ffnn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dofnet/kernels.hpp"

namespace dofnet {

namespace {

// log(1 + e^z) without overflow.
double softplus(double z) {
  if (z > 35.0) return z;
  if (z < -35.0) return std::exp(z);
  return std::log1p(std::exp(z));
}

// Hidden activations for one observation, writing into h[0..H-1].
void hidden_layer(const ParamVector& theta, const double* x, double* h) {
  const std::size_t p = theta.inputs();
  for (std::size_t j = 1; j <= theta.hidden(); ++j) {
    const double* wr = theta.w_row(j);
    const double z = wr[0] + kernels::dot(wr + 1, x, p);
    h[j - 1] = expit(z);
  }
}

double output_preactivation(const ParamVector& theta, const double* h) {
  return theta.v(0) + kernels::dot(theta.flat().data() + 1, h, theta.hidden());
}

struct Standardizer {
  std::vector<double> mean, scale;

  static Standardizer from(const Matrix& X) {
    Standardizer s;
    const std::size_t n = X.rows(), p = X.cols();
    s.mean.assign(p, 0.0);
    s.scale.assign(p, 1.0);
    if (n == 0) return s;
    for (std::size_t c = 0; c < p; ++c) {
      double m = 0.0;
      for (std::size_t r = 0; r < n; ++r) m += X(r, c);
      m /= static_cast<double>(n);
      double ss = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        const double d = X(r, c) - m;
        ss += d * d;
      }
      const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
      s.mean[c] = m;
      s.scale[c] = sd > 0.0 ? sd : 1.0;
    }
    return s;
  }

  Matrix apply(const Matrix& X) const {
    Matrix out(X.rows(), X.cols());
    for (std::size_t r = 0; r < X.rows(); ++r)
      for (std::size_t c = 0; c < X.cols(); ++c)
        out(r, c) = (X(r, c) - mean[c]) / scale[c];
    return out;
  }
};

// Objective in a numerically stable form (entropy via softplus of the output
// pre-activation), plus its analytic gradient. Used by the optimizer; the
// public penalized_objective/gradient pair evaluates the same function.
class Objective {
 public:
  Objective(const Dataset& data, const ModelConfig& config)
      : data_(data), config_(config) {}

  double value(const ParamVector& theta) const {
    const std::size_t n = data_.n();
    std::vector<double> h(theta.hidden());
    double e = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      hidden_layer(theta, data_.X.row(k), h.data());
      const double z = output_preactivation(theta, h.data());
      if (config_.criterion == FitCriterion::entropy) {
        e += softplus(z) - data_.y[k] * z;
      } else {
        const double r = data_.y[k] - expit(z);
        e += r * r;
      }
    }
    return e + config_.decay * kernels::squared_norm(theta.flat().data(), theta.size());
  }

  // Returns the objective value and fills grad (same layout as theta).
  double value_and_gradient(const ParamVector& theta, std::vector<double>& grad) const {
    const std::size_t n = data_.n();
    const std::size_t p = theta.inputs();
    const std::size_t H = theta.hidden();
    grad.assign(theta.size(), 0.0);
    std::vector<double> h(H);
    double e = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double* x = data_.X.row(k);
      hidden_layer(theta, x, h.data());
      const double z = output_preactivation(theta, h.data());
      const double yhat = expit(z);
      double dz;  // dE/dz for this observation
      if (config_.criterion == FitCriterion::entropy) {
        e += softplus(z) - data_.y[k] * z;
        dz = yhat - data_.y[k];
      } else {
        const double r = data_.y[k] - yhat;
        e += r * r;
        dz = -2.0 * r * yhat * (1.0 - yhat);
      }
      grad[0] += dz;
      for (std::size_t j = 1; j <= H; ++j) {
        const double hj = h[j - 1];
        grad[j] += dz * hj;
        const double dback = dz * theta.v(j) * hj * (1.0 - hj);
        double* gw = grad.data() + H + 1 + (j - 1) * (p + 1);
        gw[0] += dback;
        kernels::axpy(dback, x, gw + 1, p);
      }
    }
    kernels::axpy(2.0 * config_.decay, theta.flat().data(), grad.data(), theta.size());
    for (std::size_t d = 0; d < grad.size(); ++d) {
      if (!std::isfinite(grad[d]))
        throw std::runtime_error("non-finite gradient component at index " + std::to_string(d));
    }
    return e + config_.decay * kernels::squared_norm(theta.flat().data(), theta.size());
  }

 private:
  const Dataset& data_;
  const ModelConfig& config_;
};

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct MinimizeResult {
  std::vector<double> theta;
  double objective = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

// Full-batch BFGS with backtracking (Armijo) line search. The line search
// only ever accepts strictly non-increasing steps.
MinimizeResult bfgs_minimize(const Objective& obj, ParamVector theta,
                             const ModelConfig& config) {
  const std::size_t d = theta.size();
  std::vector<double> grad;
  double f = obj.value_and_gradient(theta, grad);
  if (!std::isfinite(f)) throw std::runtime_error("non-finite objective at initialization");

  // Inverse Hessian approximation, dense row-major, initialized to identity.
  std::vector<double> hinv(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) hinv[i * d + i] = 1.0;

  std::vector<double> dir(d), theta_new(d), grad_new, s(d), yv(d), hy(d);
  MinimizeResult out;
  std::size_t iter = 0;
  for (; iter < config.max_iterations; ++iter) {
    if (inf_norm(grad) < config.gradient_tolerance) {
      out.converged = true;
      break;
    }
    // dir = -Hinv * grad
    for (std::size_t i = 0; i < d; ++i)
      dir[i] = -kernels::dot(hinv.data() + i * d, grad.data(), d);
    double slope = kernels::dot(dir.data(), grad.data(), d);
    if (!(slope < 0.0)) {
      // Reset to steepest descent if the approximation lost descent.
      for (std::size_t i = 0; i < d; ++i) {
        std::fill(hinv.begin() + i * d, hinv.begin() + i * d + d, 0.0);
        hinv[i * d + i] = 1.0;
        dir[i] = -grad[i];
      }
      slope = -kernels::squared_norm(grad.data(), d);
      if (slope == 0.0) {
        out.converged = true;
        break;
      }
    }

    double step = 1.0;
    double f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < d; ++i) theta_new[i] = theta.flat()[i] + step * dir[i];
      ParamVector cand = ParamVector::from_flat(theta.inputs(), theta.hidden(), theta_new);
      const double fc = obj.value(cand);
      if (std::isfinite(fc) && fc <= f + 1e-4 * step * slope) {
        f_new = fc;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no acceptable decrease; treat as converged flat

    ParamVector cand = ParamVector::from_flat(theta.inputs(), theta.hidden(), theta_new);
    const double f_check = obj.value_and_gradient(cand, grad_new);
    (void)f_check;

    for (std::size_t i = 0; i < d; ++i) {
      s[i] = step * dir[i];
      yv[i] = grad_new[i] - grad[i];
    }
    const double sy = kernels::dot(s.data(), yv.data(), d);
    if (sy > 1e-12) {
      // BFGS inverse update: H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      const double rho = 1.0 / sy;
      for (std::size_t i = 0; i < d; ++i)
        hy[i] = kernels::dot(hinv.data() + i * d, yv.data(), d);
      const double yhy = kernels::dot(yv.data(), hy.data(), d);
      for (std::size_t i = 0; i < d; ++i) {
        double* hrow = hinv.data() + i * d;
        const double a = rho * s[i];
        const double b = hy[i];
        for (std::size_t jj = 0; jj < d; ++jj) {
          hrow[jj] += a * ((1.0 + rho * yhy) * s[jj]) - rho * (b * s[jj] + s[i] * hy[jj]);
        }
      }
    }

    theta = std::move(cand);
    grad = grad_new;
    const double rel_drop = (f - f_new) / (std::abs(f) + 1e-30);
    f = f_new;
    if (rel_drop < 1e-12) {
      ++iter;
      break;  // objective stalled
    }
  }
  out.theta = theta.flat();
  out.objective = f;
  out.iterations = iter;
  if (iter < config.max_iterations && !out.converged) {
    // Stalled line search counts as converged to the optimizer's resolution.
    out.converged = true;
  }
  return out;
}

}  // namespace

ParamVector ParamVector::from_flat(std::size_t inputs, std::size_t hidden,
                                   std::vector<double> flat) {
  if (flat.size() != dim(inputs, hidden))
    throw std::invalid_argument("ParamVector::from_flat: wrong length");
  ParamVector pv(inputs, hidden);
  pv.flat_ = std::move(flat);
  return pv;
}

void ModelConfig::validate() const {
  if (hidden_units < 1) throw std::invalid_argument("hidden_units must be >= 1");
  if (decay < 0.0) throw std::invalid_argument("decay must be >= 0");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(gradient_tolerance > 0.0)) throw std::invalid_argument("gradient_tolerance must be > 0");
  if (!(init_range > 0.0)) throw std::invalid_argument("init_range must be > 0");
}

double forward(const ParamVector& theta, const std::vector<double>& x) {
  if (x.size() != theta.inputs())
    throw std::invalid_argument("forward: input length does not match network");
  std::vector<double> h(theta.hidden());
  hidden_layer(theta, x.data(), h.data());
  return expit(output_preactivation(theta, h.data()));
}

std::vector<double> predict_all(const ParamVector& theta, const Matrix& X) {
  if (X.cols() != theta.inputs())
    throw std::invalid_argument("predict_all: column count does not match network");
  std::vector<double> out(X.rows());
  std::vector<double> h(theta.hidden());
  for (std::size_t k = 0; k < X.rows(); ++k) {
    hidden_layer(theta, X.row(k), h.data());
    out[k] = clamp_prob(expit(output_preactivation(theta, h.data())));
  }
  return out;
}

double entropy_criterion(const std::vector<double>& y, const std::vector<double>& yhat) {
  if (y.size() != yhat.size()) throw std::invalid_argument("entropy_criterion: length mismatch");
  double e = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    // 0*log(0) = 0 convention: for binary y only one term survives.
    if (y[k] > 0.0) e += y[k] * std::log(y[k] / yhat[k]);
    if (y[k] < 1.0) e += (1.0 - y[k]) * std::log((1.0 - y[k]) / (1.0 - yhat[k]));
  }
  return e;
}

double least_squares_criterion(const std::vector<double>& y, const std::vector<double>& yhat) {
  if (y.size() != yhat.size())
    throw std::invalid_argument("least_squares_criterion: length mismatch");
  double e = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double r = y[k] - yhat[k];
    e += r * r;
  }
  return e;
}

double penalized_objective(const ParamVector& theta, const Dataset& data,
                           const ModelConfig& config) {
  return Objective(data, config).value(theta);
}

std::vector<double> gradient(const ParamVector& theta, const Dataset& data,
                             const ModelConfig& config) {
  std::vector<double> g;
  Objective(data, config).value_and_gradient(theta, g);
  return g;
}

ParamVector init_weights(std::size_t inputs, std::size_t hidden, double init_range, Rng& rng) {
  ParamVector theta(inputs, hidden);
  for (double& w : theta.flat()) w = runif(rng, -init_range, init_range);
  return theta;
}

double bernoulli_loglik(const std::vector<double>& y, const std::vector<double>& yhat) {
  if (y.size() != yhat.size()) throw std::invalid_argument("bernoulli_loglik: length mismatch");
  double ll = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k)
    ll += y[k] * std::log(yhat[k]) + (1.0 - y[k]) * std::log(1.0 - yhat[k]);
  return ll;
}

FitResult fit(const Dataset& data, const ModelConfig& config) {
  config.validate();
  data.validate();
  if (data.n() < 1) throw std::invalid_argument("fit: empty dataset");

  Dataset work = data;
  if (config.standardize_inputs && data.p() > 0) {
    work.X = Standardizer::from(data.X).apply(data.X);
  }

  Objective obj(work, config);
  Rng rng(config.seed);
  MinimizeResult min;
  bool ok = false;
  for (int attempt = 0; attempt < 2 && !ok; ++attempt) {
    ParamVector theta0 = init_weights(work.p(), config.hidden_units, config.init_range, rng);
    try {
      min = bfgs_minimize(obj, theta0, config);
      ok = true;
    } catch (const std::runtime_error&) {
      if (attempt == 1) throw;
    }
  }

  FitResult res;
  res.theta_hat = ParamVector::from_flat(work.p(), config.hidden_units, min.theta);
  res.fitted = predict_all(res.theta_hat, work.X);
  res.loglik = bernoulli_loglik(data.y, res.fitted);
  const double e = config.criterion == FitCriterion::entropy
                       ? entropy_criterion(data.y, res.fitted)
                       : least_squares_criterion(data.y, res.fitted);
  res.objective =
      e + config.decay * kernels::squared_norm(res.theta_hat.flat().data(), res.theta_hat.size());
  res.converged = min.converged;
  res.iterations = min.iterations;
  return res;
}

}  // namespace dofnet
