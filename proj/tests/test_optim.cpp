#include <doctest.h>

#include "wvf/optim.hpp"

using namespace wvf;

TEST_CASE("quadratic bowl converges to the center") {
  auto obj = [](const Vec& x, Vec& grad) {
    double f = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double c = double(i + 1);
      f += 0.5 * c * (x[i] - 1.0) * (x[i] - 1.0);
      grad[i] = c * (x[i] - 1.0);
    }
    return f;
  };
  auto res = lbfgs_minimize(obj, Vec(5, -2.0), {});
  CHECK(res.converged);
  for (double xi : res.x) CHECK(xi == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(res.grad_sup_norm <= 1e-8);
}

TEST_CASE("rosenbrock valley") {
  auto obj = [](const Vec& x, Vec& grad) {
    double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
    grad[0] = -2.0 * a - 400.0 * x[0] * b;
    grad[1] = 200.0 * b;
    return a * a + 100.0 * b * b;
  };
  auto res = lbfgs_minimize(obj, {-1.2, 1.0}, {});
  CHECK(res.converged);
  CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(res.x[1] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("iteration cap raises NoConvergence when asked") {
  auto obj = [](const Vec& x, Vec& grad) {
    grad[0] = 2.0 * x[0];
    return x[0] * x[0];
  };
  OptimOptions opts;
  opts.max_iter = 0;
  opts.throw_on_failure = true;
  CHECK_THROWS_AS(lbfgs_minimize(obj, {5.0}, opts), NoConvergence);
  opts.throw_on_failure = false;
  CHECK_FALSE(lbfgs_minimize(obj, {5.0}, opts).converged);
}

TEST_CASE("nonsmooth-free start at the optimum returns immediately") {
  auto obj = [](const Vec& x, Vec& grad) {
    grad[0] = x[0];
    return 0.5 * x[0] * x[0];
  };
  auto res = lbfgs_minimize(obj, {0.0}, {});
  CHECK(res.converged);
  CHECK(res.iterations == 0);
}
