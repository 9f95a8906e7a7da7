#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"

using namespace wvf;

TEST_CASE("horizon closed form") {
  CHECK(horizon(1.0, 2.0) == 0.5);
  CHECK(horizon(1.0 / 16.0, 2.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::isinf(horizon(0.0, 2.0)));
  CHECK(std::isinf(horizon(-1.0, 3.0)));
}

TEST_CASE("generalized value at t = 0 is the terminal functional") {
  std::mt19937 rng(21);
  auto mu = testutil::random_measure(rng, 4, 2);
  auto spec = testutil::linear_spec(2.0, {0.3, -0.1});
  auto report = minimize_generalized(mu, 0.0, spec, 50);
  CHECK(report.value == doctest::Approx(evaluate_functional(spec.G, mu)).epsilon(1e-12));
}

TEST_CASE("integral terminal data decouples: ensemble equals weighted classical") {
  std::mt19937 rng(22);
  auto spec = testutil::quadratic_spec(0.5);
  for (int trial = 0; trial < 3; ++trial) {
    auto mu = testutil::random_measure(rng, 5, 2);
    double joint = minimize_generalized(mu, 0.5, spec, 150).value;
    double linear = reduce_linear(mu, 0.5, spec, 150);
    CHECK(std::fabs(joint - linear) <= 2e-3);
  }
}

TEST_CASE("wasserstein hopf-lax on linear data matches the analytic value") {
  std::mt19937 rng(23);
  Vec c{0.4, -0.2};
  double t = 0.5;
  auto mu = testutil::random_measure(rng, 4, 2);
  for (double p : {1.5, 2.0, 3.0}) {
    auto spec = testutil::linear_spec(p, c);
    double q = spec.q();
    double mean_cx = 0;
    for (std::size_t k = 0; k < mu.size(); ++k)
      mean_cx += mu.weight(k) * dot(c, mu.point(k));
    double expected = mean_cx - t * std::pow(norm2(c), q) / q;
    CHECK(std::fabs(wasserstein_hopf_lax(mu, t, spec.G, spec) - expected) <= 1e-5);
  }
}

TEST_CASE("modified hopf-lax with the power cost matches the plain hopf-lax") {
  std::mt19937 rng(24);
  auto mu = testutil::random_measure(rng, 3, 2);
  Vec c{0.3, 0.2};
  for (double p : {1.5, 2.0}) {
    auto spec = testutil::linear_spec(p, c);
    double plain = wasserstein_hopf_lax(mu, 0.6, spec.G, spec);
    double modified = modified_hopf_lax(mu, 0.6, spec.G, scalar_fns::power(p), spec);
    CHECK(std::fabs(plain - modified) <= 1e-5);
  }
}

TEST_CASE("dynamic programming residual is small on quadratic data") {
  std::mt19937 rng(25);
  auto mu = testutil::random_measure(rng, 5, 1);
  auto spec = testutil::quadratic_spec(0.5);
  auto res = dp_check(mu, 0.6, 0.3, spec, 200);
  CHECK(std::fabs(res.residual) <= 5e-3);
  CHECK(res.intermediate.size() == mu.size());
}

TEST_CASE("poincare inequality holds on random ensembles") {
  std::mt19937 rng(26);
  for (int trial = 0; trial < 20; ++trial) {
    double p = (trial % 2 == 0) ? 2.0 : 3.0;
    EnsemblePath sigma;
    std::uniform_real_distribution<double> pos(-1.0, 1.0);
    std::size_t n = 5, N = 12;
    std::vector<double> w(n, 1.0 / double(n));
    sigma.weights = w;
    for (std::size_t k = 0; k < n; ++k) {
      ParticlePath path;
      path.t_start = 0;
      path.t_end = 0.8;
      for (std::size_t i = 0; i <= N; ++i) path.positions.push_back({pos(rng), pos(rng)});
      sigma.paths.push_back(std::move(path));
    }
    auto res = poincare_check(sigma, p);
    CHECK(res.lhs <= res.rhs + 1e-6);
  }
}

TEST_CASE("metric derivative estimate is bounded by the kinetic speed") {
  std::mt19937 rng(27);
  auto mu = testutil::random_measure(rng, 4, 2);
  auto spec = testutil::quadratic_spec();
  auto report = minimize_generalized(mu, 0.5, spec, 40);
  auto md = metric_derivative_estimate(report.path, 2.0);
  for (std::size_t i = 0; i < md.size(); ++i)
    CHECK(md[i] <= report.path.kinetic_speed(i, 2.0) + 1e-9);
}

TEST_CASE("horizon guard fires") {
  std::mt19937 rng(28);
  auto mu = testutil::random_measure(rng, 3, 1);
  auto spec = testutil::quadratic_spec(0.5);  // horizon = 1/sqrt(2)
  CHECK_THROWS_AS(minimize_generalized(mu, 0.9, spec, 50), HorizonExceeded);
}

TEST_CASE("snapshots preserve weights and endpoints") {
  std::mt19937 rng(29);
  auto mu = testutil::random_measure(rng, 4, 2);
  auto sigma = EnsemblePath::stationary(mu, 0.5, 20);
  CHECK(sigma.snapshot(0).same_point_set(mu));
  CHECK(sigma.snapshot(20).same_point_set(mu));
  CHECK_NOTHROW(sigma.validate());
}
