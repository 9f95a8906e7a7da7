// Generalized value function U(mu, t) on discrete measures: ensemble action
// minimization, the linear-functional reduction, Hopf-Lax formulas, dynamic
// programming checks, horizon bound, Poincare inequality.
#pragma once

#include "wvf/classical.hpp"
#include "wvf/transport.hpp"

namespace wvf {

// Weighted family of particle paths on one shared time grid.
struct EnsemblePath {
  std::vector<double> weights;
  std::vector<ParticlePath> paths;

  std::size_t particles() const { return paths.size(); }
  std::size_t intervals() const { return paths[0].intervals(); }
  double dt() const { return paths[0].dt(); }
  double t_end() const { return paths[0].t_end; }

  DiscreteMeasure snapshot(std::size_t i) const;
  DiscreteMeasure midpoint_snapshot(std::size_t i) const;

  // (sum_k w_k |v_k(i)|^p)^{1/p}: the particle kinetic bound on the metric
  // derivative over interval i.
  double kinetic_speed(std::size_t i, double p) const;

  static EnsemblePath stationary(const DiscreteMeasure& mu, double t, std::size_t N);
  void validate() const;
};

struct EnsembleReport {
  double value = 0;
  EnsemblePath path;
  double grad_norm = 0;
  int iterations = 0;
};

// Monotone scalar cost with derivative, for the modified Hopf-Lax formula.
struct ScalarFn {
  std::function<double(double)> f;
  std::function<double(double)> df;
  double operator()(double w) const { return f(w); }
};

namespace scalar_fns {
ScalarFn power(double p);          // w^p / p
ScalarFn cosh_minus_one();
}  // namespace scalar_fns

double ensemble_action(const EnsemblePath& sigma, const ProblemSpec& spec);

// Largest T with p (2 C_p T)^p alpha < 1, C_p = p^{-1/p}; infinite for
// alpha <= 0.
double horizon(double alpha, double p);

// Minimizes the ensemble action with the terminal snapshot pinned to mu.
// Integral-kind functionals decouple into per-particle classical solves.
EnsembleReport minimize_generalized(const DiscreteMeasure& mu, double t, const ProblemSpec& spec,
                                    std::size_t N, const OptimOptions& opts = {});

// sum_i w_i u(x_i, t), with u from the best available classical evaluator.
double reduce_linear(const DiscreteMeasure& mu, double t, const ProblemSpec& spec, std::size_t N,
                     const OptimOptions& opts = {});

// inf over candidate measures tau (same weights as mu, free points) of
// G(tau) + W_p(mu, tau)^p / (p t^{p-1}). Requires V == 0.
double wasserstein_hopf_lax(const DiscreteMeasure& mu, double t, const Functional& G,
                            const ProblemSpec& spec, const OptimOptions& opts = {});

// Same candidate class with cost t ell(W_p(mu, tau)/t).
double modified_hopf_lax(const DiscreteMeasure& mu, double t, const Functional& G,
                         const ScalarFn& ell, const ProblemSpec& spec,
                         const OptimOptions& opts = {});

struct DpCheckResult {
  double lhs = 0;        // U(mu, t)
  double rhs = 0;        // U(nu, s) + tail action over [s, t]
  double residual = 0;   // rhs - lhs
  DiscreteMeasure intermediate;
};

DpCheckResult dp_check(const DiscreteMeasure& mu, double t, double s, const ProblemSpec& spec,
                       std::size_t N, const OptimOptions& opts = {});

struct PoincareResult {
  double lhs = 0;
  double rhs = 0;
};

// lhs = (sum_i ds W_p(sigma(s_i), sigma(T))^p)^{1/p},
// rhs = C_p T (sum_i ds m_i^p)^{1/p} with m_i the kinetic bound.
PoincareResult poincare_check(const EnsemblePath& sigma, double p);

// W_p of consecutive snapshots over the step, per interval.
std::vector<double> metric_derivative_estimate(const EnsemblePath& sigma, double p);

}  // namespace wvf
