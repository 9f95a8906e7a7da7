// Problem data: scalar fields on R^d, functionals on measures, exponents.
#pragma once

#include <functional>
#include <optional>
#include <string>

#include "wvf/measure.hpp"

namespace wvf {

// Scalar field with analytic gradient. Registry constructors below cover the
// cases used throughout; arbitrary smooth fields go through custom().
struct ScalarField {
  std::string name = "zero";
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  double lipschitz = 0;  // declared Lipschitz constant (for initial data g)

  double operator()(const Vec& x) const { return value(x); }
};

namespace fields {
ScalarField zero();
ScalarField linear(Vec c);                  // c . x
ScalarField quadratic(double c);            // c |x|^2
ScalarField p_power(double p);              // |x|^p / p
ScalarField custom(std::string name, std::function<double(const Vec&)> value,
                   std::function<Vec(const Vec&)> grad, double lipschitz = 0);
}  // namespace fields

enum class FunctionalKind { integral, wasserstein_power, interaction };

// G or V as a functional on measures: integral of a scalar field, a
// Wasserstein-power penalty alpha W_p(mu, rho)^p + beta, or a pairwise
// interaction energy.
struct Functional {
  FunctionalKind kind = FunctionalKind::integral;
  ScalarField f;  // integral kind: integrand; interaction kind: kernel W(x - y)
  double alpha = 0, beta = 0;
  double p = 2;
  std::optional<DiscreteMeasure> rho;

  static Functional integral(ScalarField field);
  static Functional wasserstein_power(double alpha, double beta, DiscreteMeasure rho, double p);
  static Functional interaction(ScalarField kernel);
};

double evaluate_functional(const Functional& F, const DiscreteMeasure& mu);

// d/dx_i of evaluate_functional (one vector per support point; weights
// included). Wasserstein terms differentiate through a frozen optimal plan.
std::vector<Vec> functional_gradient(const Functional& F, const DiscreteMeasure& mu);

// Exponent p, initial condition g, potential V, growth constants, and the
// generalized functionals built from them.
struct ProblemSpec {
  double p = 2;
  ScalarField g = fields::zero();
  ScalarField V = fields::zero();
  Functional G = Functional::integral(fields::zero());
  Functional Vf = Functional::integral(fields::zero());
  double alpha = 0, beta = 0;

  double q() const { return conjugate_exponent(p); }

  static ProblemSpec classical(double p, ScalarField g, ScalarField V, double alpha = 0,
                               double beta = 0);

  // g == 0 and V = |x|^2/2 at p = 2, or V = |x|^p/p: the two closed-form
  // families.
  enum class ClosedForm { none, quadratic_p2, p_power };
  ClosedForm closed_form() const;
};

}  // namespace wvf
