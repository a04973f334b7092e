#include "doctest.h"

#include <cmath>

#include "dofnet/data_gen.hpp"

using namespace dofnet;

TEST_CASE("scenario generation: shapes, support, prevalence") {
  ScenarioSpec spec;
  spec.n = 4000;
  spec.p = 4;
  spec.prevalence = 0.3;

  SUBCASE("binary inputs") {
    spec.scenario = Scenario::binary_inputs;
    Rng rng(1);
    const Dataset d = gen_scenario(spec, rng);
    CHECK(d.n() == 4000);
    CHECK(d.p() == 4);
    for (std::size_t k = 0; k < d.n(); ++k)
      for (std::size_t i = 0; i < d.p(); ++i)
        CHECK((d.X(k, i) == 0.0 || d.X(k, i) == 1.0));
    // Prevalence within 3 binomial SDs of 0.3 (SD ~ 0.0072 at n=4000).
    CHECK(static_cast<double>(d.n1()) / 4000.0 == doctest::Approx(0.3).epsilon(0.08));
  }

  SUBCASE("continuous inputs") {
    spec.scenario = Scenario::continuous_inputs;
    Rng rng(2);
    const Dataset d = gen_scenario(spec, rng);
    double mean = 0.0, var = 0.0;
    for (std::size_t k = 0; k < d.n(); ++k) mean += d.X(k, 0);
    mean /= 4000.0;
    for (std::size_t k = 0; k < d.n(); ++k) var += (d.X(k, 0) - mean) * (d.X(k, 0) - mean);
    var /= 3999.0;
    CHECK(mean == doctest::Approx(0.0).epsilon(0.1));
    CHECK(std::abs(mean) < 0.06);  // ~3.8 SEs of N(0,1) mean at n=4000
    CHECK(var == doctest::Approx(1.0).epsilon(0.1));
  }

  SUBCASE("mixed inputs: first m binary, rest continuous") {
    spec.scenario = Scenario::mixed_inputs;
    spec.m = 2;
    Rng rng(3);
    const Dataset d = gen_scenario(spec, rng);
    bool cont_seen = false;
    for (std::size_t k = 0; k < d.n(); ++k) {
      CHECK((d.X(k, 0) == 0.0 || d.X(k, 0) == 1.0));
      CHECK((d.X(k, 1) == 0.0 || d.X(k, 1) == 1.0));
      if (d.X(k, 2) != 0.0 && d.X(k, 2) != 1.0) cont_seen = true;
    }
    CHECK(cont_seen);
  }
}

TEST_CASE("generation is deterministic in the engine state") {
  ScenarioSpec spec;
  spec.n = 50;
  spec.p = 3;
  Rng a(77), b(77);
  const Dataset da = gen_scenario(spec, a);
  const Dataset db = gen_scenario(spec, b);
  CHECK(da.y == db.y);
  CHECK(da.X.data() == db.X.data());
}

TEST_CASE("true-model generation fixes v0 = 1 and links y to X") {
  TrueModelSpec spec;
  spec.n = 3000;
  spec.p = 3;
  spec.hidden = 5;
  spec.weight_scale = 1.0;
  Rng rng(11);
  const auto [d, theta] = gen_true_model(spec, rng);
  CHECK(theta.v(0) == 1.0);
  CHECK(d.n() == 3000);
  // Empirical prevalence should match the mean of the generating probabilities.
  double psum = 0.0;
  std::vector<double> x(spec.p);
  for (std::size_t k = 0; k < d.n(); ++k) {
    for (std::size_t i = 0; i < spec.p; ++i) x[i] = d.X(k, i);
    psum += forward(theta, x);
  }
  CHECK(static_cast<double>(d.n1()) / 3000.0 == doctest::Approx(psum / 3000.0).epsilon(0.1));
}

TEST_CASE("intercept-only generation: prevalence and covariate independence") {
  Rng rng(13);
  const Dataset d = gen_intercept_only(5000, 2, 0.5, rng);
  CHECK(static_cast<double>(d.n1()) / 5000.0 == doctest::Approx(0.5).epsilon(0.05));
  // Covariate means conditional on y should agree (independence), ~4 SEs.
  double m1 = 0.0, m0 = 0.0;
  for (std::size_t k = 0; k < d.n(); ++k) (d.y[k] == 1.0 ? m1 : m0) += d.X(k, 0);
  m1 /= static_cast<double>(d.n1());
  m0 /= static_cast<double>(d.n0());
  CHECK(std::abs(m1 - m0) < 0.12);
}

TEST_CASE("spec validation") {
  ScenarioSpec bad;
  bad.scenario = Scenario::mixed_inputs;
  bad.p = 2;
  bad.m = 2;  // needs 0 < m < p
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  ScenarioSpec bad2;
  bad2.prevalence = 1.0;
  CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);
  Rng rng(1);
  CHECK_THROWS_AS(gen_intercept_only(10, 1, 0.0, rng), std::invalid_argument);
}
