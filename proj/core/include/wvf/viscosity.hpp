// Numerical harness for the viscosity sub/supersolution inequalities on
// Wasserstein space, HJE residuals on closed-form data, and the Legendre
// transform.
#pragma once

#include <limits>

#include "wvf/ensemble.hpp"

namespace wvf {

// Candidate cotangent element xi sampled on the support of mu_0, plus a
// candidate time slope a.
struct TestCotangent {
  std::function<Vec(const Vec&)> xi;
  double a = 0;
};

// v = lambda (r - id) with (id x r)_# mu_0 certified optimal for
// W_p(mu_0, r_# mu_0).
struct TangentDirection {
  std::function<Vec(const Vec&)> r;
  double lambda = 1;
  bool certified_optimal = false;
};

TangentDirection make_tangent_direction(const DiscreteMeasure& mu0,
                                        std::function<Vec(const Vec&)> r, double lambda, double p,
                                        bool strict = false);

// Standard direction family: translations, a dilation, and the duality-map
// saturation direction v = |xi|^{q-2} xi.
std::vector<TangentDirection> default_direction_family(const DiscreteMeasure& mu0,
                                                       const TestCotangent& cand, double p);

using MeasureValueEvaluator = std::function<double(const DiscreteMeasure&, double)>;

struct SubsolutionReport {
  // a + (1/q)||xi||_q^q + V(mu_0): the subsolution inequality requires <= 0
  double value52 = 0;
  // per direction: a - <xi, v> - (1/p)||v||_p^p + V(mu_0)  (each <= 0;
  // the supremum over directions approaches value52 from below)
  std::vector<double> direction_values;
  double max_direction_value = -std::numeric_limits<double>::infinity();
  // per direction: dynamic-programming slack measured with the evaluator;
  // nonnegative up to o(h) for a true value function
  std::vector<double> dp_slack;
};

SubsolutionReport subsolution_probe(const MeasureValueEvaluator& U, const DiscreteMeasure& mu0,
                                    double t0, const TestCotangent& cand,
                                    const std::vector<TangentDirection>& directions, double h,
                                    const ProblemSpec& spec);

struct SupersolutionReport {
  // a + (1/q)||xi||_q^q + V(mu_0): the supersolution inequality requires >= 0
  double value54 = 0;
  // per h: a minus the measured action quotient along a near-optimal
  // ensemble; tends to value54 when Young's inequality saturates
  std::vector<double> measured_gap;
  std::vector<double> ratio;  // W_p(sigma(t0-h), mu_0)/h, bounded by contract
};

SupersolutionReport supersolution_probe(const MeasureValueEvaluator& U, const DiscreteMeasure& mu0,
                                        double t0, const TestCotangent& cand,
                                        const std::vector<double>& h_sequence,
                                        const ProblemSpec& spec, std::size_t N,
                                        const OptimOptions& opts = {});

// |d_t U + (1/q) sum_k w_k |grad u(x_k,t)|^q + V(mu)| with analytic
// closed-form pieces.
double hje_residual_wasserstein(const ProblemSpec& spec, const DiscreteMeasure& mu, double t);
double hje_residual_wasserstein(const ProblemSpec& spec, const DiscreteMeasure& mu, double t,
                                const AOde& ode);

// Legendre transform ell*(z) = sup_w { z w - ell(w) } by monotone grid search
// plus golden-section refinement on [0, w_max].
struct LegendreTransform {
  ScalarFn ell;
  double w_max = 64;

  double operator()(double z) const;
};

double legendre(const ScalarFn& ell, double z, double w_max = 64);

struct ModifiedHjeReport {
  double value = 0;        // U(mu, t)
  double dt_u = 0;         // finite-difference time derivative
  double grad_norm_q = 0;  // ||grad_mu U||_{L^q(mu)}
  double residual = 0;     // |dt_u + ell*(grad_norm_q)|
};

// Residual of U_t + ell*(||grad_mu U||_q) = 0 for the modified Hopf-Lax value
// function, with finite differences over t and over point perturbations.
ModifiedHjeReport modified_hje_residual(const DiscreteMeasure& mu, double t, const Functional& G,
                                        const ScalarFn& ell, const ProblemSpec& spec,
                                        double fd_t = 1e-4, double fd_x = 1e-5,
                                        const OptimOptions& opts = {});

}  // namespace wvf
