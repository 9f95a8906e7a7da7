#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "wvf/transport.hpp"

using namespace wvf;

TEST_CASE("distance to itself is zero") {
  std::mt19937 rng(1);
  auto mu = testutil::random_measure(rng, 6, 2);
  CHECK(wasserstein_distance(mu, mu, 2) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("two diracs: distance is the point distance") {
  auto a = DiscreteMeasure::dirac({0.0, 0.0});
  auto b = DiscreteMeasure::dirac({3.0, 4.0});
  for (double p : {1.5, 2.0, 3.0})
    CHECK(wasserstein_distance(a, b, p) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("matches the permutation oracle on small uniform instances") {
  std::mt19937 rng(2);
  for (double p : {1.5, 2.0, 3.0}) {
    for (int trial = 0; trial < 50; ++trial) {
      auto mu = testutil::random_measure(rng, 5, 2, true);
      auto nu = testutil::random_measure(rng, 5, 2, true);
      double exact = brute_force_wasserstein(mu, nu, p);
      CHECK(std::fabs(wasserstein_distance(mu, nu, p) - exact) <= 1e-8);
    }
  }
}

TEST_CASE("symmetry and triangle inequality") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = testutil::random_measure(rng, 4, 2);
    auto b = testutil::random_measure(rng, 6, 2);
    auto c = testutil::random_measure(rng, 5, 2);
    for (double p : {1.5, 2.0, 3.0}) {
      double ab = wasserstein_distance(a, b, p);
      double ba = wasserstein_distance(b, a, p);
      CHECK(std::fabs(ab - ba) <= 1e-9);
      CHECK(ab <= wasserstein_distance(a, c, p) + wasserstein_distance(c, b, p) + 1e-9);
    }
  }
}

TEST_CASE("plan marginals match the inputs") {
  std::mt19937 rng(4);
  auto mu = testutil::random_measure(rng, 7, 3);
  auto nu = testutil::random_measure(rng, 4, 3);
  auto res = wasserstein(mu, nu, 2);
  CHECK_NOTHROW(res.plan.check_marginals(1e-9));
  CHECK(res.plan.cost() == doctest::Approx(std::pow(res.distance, 2.0)));
  CHECK(is_optimal_plan(res.plan, 1e-9));
}

TEST_CASE("crossed plan is detected as suboptimal") {
  auto mu = DiscreteMeasure::uniform({{0.0}, {1.0}});
  auto nu = DiscreteMeasure::uniform({{0.0}, {1.0}});
  TransportPlan crossed{mu, nu, {0.0, 0.5, 0.5, 0.0}, 2.0};
  CHECK_FALSE(is_optimal_plan(crossed, 1e-9));
}

TEST_CASE("displacement interpolation is a constant-speed geodesic") {
  std::mt19937 rng(5);
  auto mu = testutil::random_measure(rng, 5, 2);
  auto nu = testutil::random_measure(rng, 5, 2);
  for (double p : {1.5, 2.0, 3.0}) {
    auto res = wasserstein(mu, nu, p);
    for (double s : {0.25, 0.5, 0.75}) {
      auto mid = displacement_interpolate(res.plan, s);
      CHECK(wasserstein_distance(mu, mid, p) ==
            doctest::Approx(s * res.distance).epsilon(1e-7));
      CHECK(wasserstein_distance(mid, nu, p) ==
            doctest::Approx((1.0 - s) * res.distance).epsilon(1e-7));
    }
    CHECK(displacement_interpolate(res.plan, 0.0).same_point_set(mu, 1e-9));
    CHECK(displacement_interpolate(res.plan, 1.0).same_point_set(nu, 1e-9));
  }
}

TEST_CASE("translation invariance of the distance") {
  std::mt19937 rng(6);
  auto mu = testutil::random_measure(rng, 5, 2);
  auto nu = testutil::random_measure(rng, 6, 2);
  Vec c{0.7, -0.3};
  auto shift = [c](const Vec& x) { return x + c; };
  for (double p : {1.5, 2.0, 3.0})
    CHECK(wasserstein_distance(mu.pushforward(shift), nu.pushforward(shift), p) ==
          doctest::Approx(wasserstein_distance(mu, nu, p)).epsilon(1e-9));
}

TEST_CASE("brute force rejects non-uniform or large inputs") {
  auto mu = DiscreteMeasure({{0.0}, {1.0}}, {0.3, 0.7});
  auto nu = DiscreteMeasure::uniform({{0.0}, {1.0}});
  CHECK_THROWS_AS(brute_force_wasserstein(mu, nu, 2), NonUniform);
  std::vector<Vec> many(9, Vec{0.0});
  for (std::size_t i = 0; i < many.size(); ++i) many[i][0] = double(i);
  auto big = DiscreteMeasure::uniform(many);
  CHECK_THROWS_AS(brute_force_wasserstein(big, big, 2), TooLarge);
}
