// Limited-memory quasi-Newton descent used by all minimization operations.
#pragma once

#include <functional>

#include "wvf/common.hpp"

namespace wvf {

struct OptimOptions {
  double grad_tol = 1e-8;  // sup-norm of the gradient
  int max_iter = 5000;
  int history = 10;
  bool throw_on_failure = true;
  // Optional inverse-Hessian seed H0 applied in place of the scalar gamma
  // scaling. Ill-conditioned transcription problems set this to a tridiagonal
  // kinetic solve.
  std::function<Vec(const Vec&)> precondition;
};

struct OptimResult {
  Vec x;
  double value = 0;
  double grad_sup_norm = 0;
  int iterations = 0;
  bool converged = false;
};

// Minimizes f over R^n from x0. objective fills the gradient and returns the
// value. Throws NoConvergence when the gradient tolerance is not met within
// the iteration cap (unless opts.throw_on_failure is cleared).
OptimResult lbfgs_minimize(const std::function<double(const Vec&, Vec&)>& objective, Vec x0,
                           const OptimOptions& opts = {});

}  // namespace wvf
