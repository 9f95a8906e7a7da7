#include "wvf/optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace wvf {

namespace {
double sup_norm(const Vec& g) {
  double m = 0;
  for (double v : g) m = std::max(m, std::fabs(v));
  return m;
}
}  // namespace

OptimResult lbfgs_minimize(const std::function<double(const Vec&, Vec&)>& objective, Vec x0,
                           const OptimOptions& opts) {
  const std::size_t n = x0.size();
  Vec x = std::move(x0), grad(n);
  double f = objective(x, grad);

  std::deque<Vec> s_hist, y_hist;
  std::deque<double> rho_hist;

  OptimResult res;
  res.iterations = 0;
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    double gnorm = sup_norm(grad);
    if (gnorm <= opts.grad_tol) {
      res.converged = true;
      break;
    }

    // two-loop recursion
    Vec d = grad;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      alpha[k] = rho_hist[k] * dot(s_hist[k], d);
      d -= alpha[k] * y_hist[k];
    }
    if (opts.precondition) {
      d = opts.precondition(d);
      if (!s_hist.empty()) {
        const Vec& s = s_hist.back();
        const Vec& y = y_hist.back();
        double gamma = dot(s, y) / std::max(1e-300, dot(y, opts.precondition(y)));
        d = gamma * d;
      }
    } else if (!s_hist.empty()) {
      const Vec& s = s_hist.back();
      const Vec& y = y_hist.back();
      double gamma = dot(s, y) / std::max(1e-300, dot(y, y));
      d = gamma * d;
    }
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      double beta = rho_hist[k] * dot(y_hist[k], d);
      d += (alpha[k] - beta) * s_hist[k];
    }
    for (double& v : d) v = -v;

    double gd = dot(grad, d);
    if (gd >= 0) {  // not a descent direction; fall back to steepest descent
      d = -1.0 * grad;
      gd = dot(grad, d);
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    // backtracking Armijo line search
    double step = 1.0;
    const double c1 = 1e-4;
    Vec x_new(n), g_new(n);
    double f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * d[i];
      f_new = objective(x_new, g_new);
      // The eps term keeps the search usable once |step * gd| falls below the
      // floating-point resolution of f (approximate Armijo a la Hager-Zhang);
      // without it the iteration stalls with the gradient still above tol.
      const double eps_f = 1e-15 * (std::fabs(f) + 1.0);
      if (std::isfinite(f_new) && f_new <= f + c1 * step * gd + eps_f) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stalled at numerical noise; check tolerance below

    Vec s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = g_new[i] - grad[i];
    }
    double sy = dot(s, y);
    if (sy > 1e-14 * std::max(1.0, dot(y, y))) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (int(s_hist.size()) > opts.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    x = std::move(x_new);
    grad = g_new;
    f = f_new;
  }

  res.x = std::move(x);
  res.value = f;
  res.grad_sup_norm = sup_norm(grad);
  res.iterations = iter;
  res.converged = res.converged || res.grad_sup_norm <= opts.grad_tol;
  if (!res.converged && opts.throw_on_failure)
    throw NoConvergence("gradient sup-norm " + std::to_string(res.grad_sup_norm) +
                        " above tolerance after " + std::to_string(iter) + " iterations");
  return res;
}

}  // namespace wvf
