#include "wvf/problem.hpp"

#include <cmath>

#include "wvf/transport.hpp"

namespace wvf {
namespace fields {

ScalarField zero() {
  ScalarField f;
  f.name = "zero";
  f.value = [](const Vec&) { return 0.0; };
  f.grad = [](const Vec& x) { return Vec(x.size(), 0.0); };
  f.lipschitz = 0;
  return f;
}

ScalarField linear(Vec c) {
  ScalarField f;
  f.name = "linear";
  f.lipschitz = norm2(c);
  f.value = [c](const Vec& x) { return dot(c, x); };
  f.grad = [c](const Vec&) { return c; };
  return f;
}

ScalarField quadratic(double c) {
  ScalarField f;
  f.name = "quadratic";
  f.value = [c](const Vec& x) { return c * dot(x, x); };
  f.grad = [c](const Vec& x) { return (2.0 * c) * x; };
  return f;
}

ScalarField p_power(double p) {
  ScalarField f;
  f.name = "p_power";
  f.value = [p](const Vec& x) { return std::pow(norm2(x), p) / p; };
  f.grad = [p](const Vec& x) { return duality_map(x, p); };
  return f;
}

ScalarField custom(std::string name, std::function<double(const Vec&)> value,
                   std::function<Vec(const Vec&)> grad, double lipschitz) {
  ScalarField f;
  f.name = std::move(name);
  f.value = std::move(value);
  f.grad = std::move(grad);
  f.lipschitz = lipschitz;
  return f;
}

}  // namespace fields

Functional Functional::integral(ScalarField field) {
  Functional F;
  F.kind = FunctionalKind::integral;
  F.f = std::move(field);
  return F;
}

Functional Functional::wasserstein_power(double alpha, double beta, DiscreteMeasure rho, double p) {
  Functional F;
  F.kind = FunctionalKind::wasserstein_power;
  F.alpha = alpha;
  F.beta = beta;
  F.rho = std::move(rho);
  F.p = p;
  return F;
}

Functional Functional::interaction(ScalarField kernel) {
  Functional F;
  F.kind = FunctionalKind::interaction;
  F.f = std::move(kernel);
  return F;
}

double evaluate_functional(const Functional& F, const DiscreteMeasure& mu) {
  switch (F.kind) {
    case FunctionalKind::integral: {
      double s = 0;
      for (std::size_t i = 0; i < mu.size(); ++i) s += mu.weight(i) * F.f(mu.point(i));
      return s;
    }
    case FunctionalKind::wasserstein_power: {
      double w = wasserstein_distance(mu, *F.rho, F.p);
      return F.alpha * std::pow(w, F.p) + F.beta;
    }
    case FunctionalKind::interaction: {
      double s = 0;
      for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t j = 0; j < mu.size(); ++j)
          s += mu.weight(i) * mu.weight(j) * F.f(mu.point(i) - mu.point(j));
      return s;
    }
  }
  throw Error("unreachable");
}

std::vector<Vec> functional_gradient(const Functional& F, const DiscreteMeasure& mu) {
  std::vector<Vec> g(mu.size(), Vec(mu.dim(), 0.0));
  switch (F.kind) {
    case FunctionalKind::integral:
      for (std::size_t i = 0; i < mu.size(); ++i) g[i] = mu.weight(i) * F.f.grad(mu.point(i));
      return g;
    case FunctionalKind::wasserstein_power: {
      auto res = wasserstein(mu, *F.rho, F.p);
      // Danskin: differentiate the cost with the plan frozen.
      for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t j = 0; j < F.rho->size(); ++j) {
          double m = res.plan.at(i, j);
          if (m > 0) g[i] += (F.alpha * F.p * m) * duality_map(mu.point(i) - F.rho->point(j), F.p);
        }
      return g;
    }
    case FunctionalKind::interaction:
      for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t j = 0; j < mu.size(); ++j) {
          if (i == j) continue;
          double w = mu.weight(i) * mu.weight(j);
          g[i] += w * F.f.grad(mu.point(i) - mu.point(j));
          g[i] -= w * F.f.grad(mu.point(j) - mu.point(i));
        }
      return g;
  }
  throw Error("unreachable");
}

ProblemSpec ProblemSpec::classical(double p, ScalarField g, ScalarField V, double alpha,
                                   double beta) {
  if (p <= 1) throw ValidationError("exponent p must exceed 1");
  ProblemSpec s;
  s.p = p;
  s.g = g;
  s.V = V;
  s.G = Functional::integral(std::move(g));
  s.Vf = Functional::integral(std::move(V));
  s.alpha = alpha;
  s.beta = beta;
  return s;
}

ProblemSpec::ClosedForm ProblemSpec::closed_form() const {
  if (g.name != "zero") return ClosedForm::none;
  if (p == 2 && V.name == "quadratic" && std::fabs(V(Vec{1.0}) - 0.5) < 1e-15)
    return ClosedForm::quadratic_p2;
  if (V.name == "p_power") return p == 2 ? ClosedForm::quadratic_p2 : ClosedForm::p_power;
  return ClosedForm::none;
}

}  // namespace wvf
