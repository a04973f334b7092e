#include "doctest.h"

#include <cmath>
#include <vector>

#include "dofnet/data_gen.hpp"
#include "dofnet/ffnn.hpp"
#include "dofnet/rng.hpp"

using namespace dofnet;

TEST_CASE("expit basic values and saturation") {
  CHECK(expit(0.0) == 0.5);
  CHECK(expit(800.0) == doctest::Approx(1.0));
  CHECK(expit(-800.0) == doctest::Approx(0.0));
  CHECK(std::isfinite(expit(-1e6)));
  CHECK(expit(1.5) + expit(-1.5) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("ParamVector layout and dimension") {
  // D = (p+2)H + 1.
  CHECK(ParamVector::dim(2, 2) == 9);
  CHECK(ParamVector::dim(10, 5) == 61);
  ParamVector t(2, 2);
  t.v(0) = 1.0;
  t.v(2) = 2.0;
  t.w(1, 0) = 3.0;
  t.w(2, 2) = 4.0;
  // Flat layout: [v0 v1 v2 | w10 w11 w12 | w20 w21 w22].
  CHECK(t.flat()[0] == 1.0);
  CHECK(t.flat()[2] == 2.0);
  CHECK(t.flat()[3] == 3.0);
  CHECK(t.flat()[8] == 4.0);
  CHECK(t.w_row(1)[0] == 3.0);
}

TEST_CASE("forward matches a hand-computed one-unit network") {
  // v0=0.5, v1=-1, w10=0.2, w11=0.3, x=2:
  // hidden = expit(0.8) = 0.6899744811276125
  // output = expit(0.5 - 0.6899744811276125) = 0.4526487043503502
  ParamVector t(1, 1);
  t.v(0) = 0.5;
  t.v(1) = -1.0;
  t.w(1, 0) = 0.2;
  t.w(1, 1) = 0.3;
  CHECK(forward(t, {2.0}) == doctest::Approx(0.4526487043503502).epsilon(1e-14));
}

TEST_CASE("fit criteria match independent formulas") {
  const std::vector<double> y = {1.0, 0.0, 1.0};
  const std::vector<double> yhat = {0.8, 0.3, 0.6};
  // -sum y log yhat + (1-y) log(1-yhat) = 1.0906441190189329
  CHECK(entropy_criterion(y, yhat) == doctest::Approx(1.0906441190189329).epsilon(1e-14));
  CHECK(least_squares_criterion(y, yhat) ==
        doctest::Approx(0.04 + 0.09 + 0.16).epsilon(1e-14));
  CHECK(bernoulli_loglik(y, yhat) == doctest::Approx(-1.0906441190189329).epsilon(1e-14));
  CHECK(entropy_criterion({1.0, 0.0}, {1.0 - kProbEps, kProbEps}) ==
        doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("analytic gradient matches central finite differences") {
  Rng rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t p = 1 + rindex(rng, 3), H = 1 + rindex(rng, 3), n = 5 + rindex(rng, 10);
    Dataset d;
    d.X = Matrix(n, p);
    d.y.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      d.y[k] = rbernoulli(rng, 0.5);
      for (std::size_t i = 0; i < p; ++i) d.X(k, i) = rnorm(rng);
    }
    ModelConfig cfg;
    cfg.hidden_units = H;
    cfg.decay = trial % 2 == 0 ? 0.05 : 0.0;
    cfg.criterion = trial % 3 == 0 ? FitCriterion::least_squares : FitCriterion::entropy;
    ParamVector theta = init_weights(p, H, 0.7, rng);

    const std::vector<double> g = gradient(theta, d, cfg);
    const double h = 1e-6;
    for (std::size_t q = 0; q < theta.size(); ++q) {
      ParamVector tp = theta, tm = theta;
      tp.flat()[q] += h;
      tm.flat()[q] -= h;
      const double fd = (penalized_objective(tp, d, cfg) - penalized_objective(tm, d, cfg)) /
                        (2.0 * h);
      const double scale = std::max({1.0, std::abs(g[q]), std::abs(fd)});
      CHECK(std::abs(g[q] - fd) / scale < 1e-5);
    }
  }
}

TEST_CASE("fit satisfies the objective invariant and is seed-deterministic") {
  Rng rng(17);
  ScenarioSpec spec;
  spec.n = 60;
  spec.p = 2;
  const Dataset d = gen_scenario(spec, rng);

  ModelConfig cfg;
  cfg.hidden_units = 2;
  cfg.decay = 0.01;
  cfg.seed = 5;
  const FitResult a = fit(d, cfg);
  const FitResult b = fit(d, cfg);
  CHECK(a.fitted == b.fitted);
  CHECK(a.theta_hat.flat() == b.theta_hat.flat());

  const double recomputed =
      entropy_criterion(d.y, a.fitted) +
      cfg.decay * [&] {
        double s = 0.0;
        for (double v : a.theta_hat.flat()) s += v * v;
        return s;
      }();
  CHECK(a.objective == doctest::Approx(recomputed).epsilon(1e-10));
  for (double p_ : a.fitted) {
    CHECK(p_ >= kProbEps);
    CHECK(p_ <= 1.0 - kProbEps);
  }
}

TEST_CASE("fit drives the objective below the initial value and learns signal") {
  // Strongly separated data: y = 1[x > 0] with a wide margin.
  const std::size_t n = 40;
  Dataset d;
  d.X = Matrix(n, 1);
  d.y.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    d.X(k, 0) = k < n / 2 ? -2.0 - 0.05 * static_cast<double>(k)
                          : 2.0 + 0.05 * static_cast<double>(k);
    d.y[k] = k < n / 2 ? 0.0 : 1.0;
  }
  ModelConfig cfg;
  cfg.hidden_units = 2;
  cfg.decay = 0.001;
  cfg.seed = 3;
  const FitResult res = fit(d, cfg);
  std::size_t correct = 0;
  for (std::size_t k = 0; k < n; ++k) correct += (res.fitted[k] > 0.5) == (d.y[k] == 1.0);
  CHECK(correct == n);
  CHECK(res.loglik > -5.0);  // near-perfect fit on separable data
}

TEST_CASE("fit handles an empty covariate matrix (intercept-only network)") {
  Dataset d;
  d.X = Matrix(10, 0);
  d.y = {1, 0, 0, 1, 0, 0, 0, 1, 0, 0};
  ModelConfig cfg;
  cfg.hidden_units = 2;
  cfg.decay = 0.05;
  cfg.seed = 1;
  const FitResult res = fit(d, cfg);
  // Every fitted value is identical (no covariates to distinguish rows).
  for (double v : res.fitted) CHECK(v == doctest::Approx(res.fitted[0]).epsilon(1e-12));
  CHECK(res.fitted[0] == doctest::Approx(0.3).epsilon(0.25));
}

TEST_CASE("config validation rejects bad settings") {
  ModelConfig cfg;
  cfg.hidden_units = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.hidden_units = 2;
  cfg.decay = -0.1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
