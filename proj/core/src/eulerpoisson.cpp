#include "wvf/eulerpoisson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wvf {

namespace {

struct State {
  Vec x, m;
};

// One RK4 step of xdot = |m|^{q-2} m, mdot = -grad V(x). Throws if the
// momentum keeps passing through zero for p != 2 after 40 halvings.
State rk4_step(const State& s, double h, double p, double q, const ScalarField& V, int depth) {
  auto vel = [&](const Vec& m) { return duality_map(m, q); };
  auto force = [&](const Vec& x) { return -1.0 * V.grad(x); };

  bool degenerate = false;
  auto check = [&](const Vec& m) {
    if (p != 2.0 && norm2(m) < 1e-12) degenerate = true;
  };

  Vec k1x = vel(s.m), k1m = force(s.x);
  check(s.m);
  Vec x2 = s.x + (0.5 * h) * k1x, m2 = s.m + (0.5 * h) * k1m;
  check(m2);
  Vec k2x = vel(m2), k2m = force(x2);
  Vec x3 = s.x + (0.5 * h) * k2x, m3 = s.m + (0.5 * h) * k2m;
  check(m3);
  Vec k3x = vel(m3), k3m = force(x3);
  Vec x4 = s.x + h * k3x, m4 = s.m + h * k3m;
  check(m4);
  Vec k4x = vel(m4), k4m = force(x4);

  if (degenerate) {
    if (depth >= 40) throw DualityDegenerate("momentum crossed zero with p != 2");
    State half = rk4_step(s, h / 2, p, q, V, depth + 1);
    return rk4_step(half, h / 2, p, q, V, depth + 1);
  }

  State out;
  out.x = s.x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  out.m = s.m + (h / 6.0) * (k1m + 2.0 * k2m + 2.0 * k3m + k4m);
  return out;
}

}  // namespace

Characteristic euler_lagrange_shoot(const Vec& x0, const Vec& v0, double t,
                                    const ProblemSpec& spec, std::size_t steps) {
  const double p = spec.p, q = spec.q();
  const double h = t / double(steps);

  Characteristic ch;
  ch.path.t_start = 0;
  ch.path.t_end = t;
  State s{x0, duality_map(v0, p)};
  ch.path.positions.push_back(s.x);
  ch.momenta.push_back(s.m);
  for (std::size_t i = 0; i < steps; ++i) {
    s = rk4_step(s, h, p, q, spec.V, 0);
    ch.path.positions.push_back(s.x);
    ch.momenta.push_back(s.m);
  }
  return ch;
}

Characteristic solve_characteristic_bvp(const Vec& x, double t, const ProblemSpec& spec,
                                        std::size_t steps, double tol, int max_iter) {
  const std::size_t d = x.size();
  const double q = spec.q();

  auto shoot = [&](const Vec& y) {
    Vec v0 = duality_map(spec.g.grad(y), q);  // |v|^{p-2} v = grad g  =>  v = |m|^{q-2} m
    return euler_lagrange_shoot(y, v0, t, spec, steps);
  };
  auto miss = [&](const Characteristic& ch) { return ch.path.positions.back() - x; };

  Vec y = x;
  Characteristic ch = shoot(y);
  Vec r = miss(ch);
  double rnorm = norm2(r);

  for (int iter = 0; iter < max_iter && rnorm > tol; ++iter) {
    // finite-difference Jacobian of the miss with respect to y
    const double hj = 1e-6 * std::max(1.0, norm2(y));
    std::vector<Vec> J(d, Vec(d));  // J[c] = column c
    for (std::size_t c = 0; c < d; ++c) {
      Vec yp = y;
      yp[c] += hj;
      Vec rp = miss(shoot(yp));
      for (std::size_t rrow = 0; rrow < d; ++rrow) J[c][rrow] = (rp[rrow] - r[rrow]) / hj;
    }
    // solve J dy = -r by Gaussian elimination
    std::vector<Vec> A(d, Vec(d + 1));
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t c = 0; c < d; ++c) A[i][c] = J[c][i];
      A[i][d] = -r[i];
    }
    for (std::size_t col = 0; col < d; ++col) {
      std::size_t piv = col;
      for (std::size_t i = col + 1; i < d; ++i)
        if (std::fabs(A[i][col]) > std::fabs(A[piv][col])) piv = i;
      std::swap(A[col], A[piv]);
      if (std::fabs(A[col][col]) < 1e-300) throw NoConvergence("singular shooting Jacobian");
      for (std::size_t i = 0; i < d; ++i) {
        if (i == col) continue;
        double f = A[i][col] / A[col][col];
        for (std::size_t c = col; c <= d; ++c) A[i][c] -= f * A[col][c];
      }
    }
    Vec dy(d);
    for (std::size_t i = 0; i < d; ++i) dy[i] = A[i][d] / A[i][i];

    // damped update
    double step = 1.0;
    for (int bt = 0; bt < 30; ++bt) {
      Vec y_new = y + step * dy;
      Characteristic ch_new = shoot(y_new);
      Vec r_new = miss(ch_new);
      if (norm2(r_new) < rnorm) {
        y = std::move(y_new);
        ch = std::move(ch_new);
        r = std::move(r_new);
        rnorm = norm2(r);
        break;
      }
      step *= 0.5;
      if (bt == 29)
        throw NoConvergence("shooting stalled, miss distance " + std::to_string(rnorm));
    }
  }
  if (rnorm > tol)
    throw NoConvergence("shooting did not converge, miss distance " + std::to_string(rnorm));
  return ch;
}

std::vector<TestField> default_test_fields(const Vec& box_lo, const Vec& box_hi) {
  const std::size_t d = box_lo.size();
  // support on twice the bounding box, centered
  Vec center(d), radius(d);
  for (std::size_t c = 0; c < d; ++c) {
    center[c] = 0.5 * (box_lo[c] + box_hi[c]);
    radius[c] = std::max(1e-6, (box_hi[c] - box_lo[c]));  // half-width doubled
    radius[c] = std::max(radius[c], 1.0);
  }

  // cutoff chi(x) = prod_c (1 - u_c^2)^4 on |u_c| < 1, u = (x - center)/radius
  auto cutoff = [center, radius, d](const Vec& x) {
    double v = 1;
    for (std::size_t c = 0; c < d; ++c) {
      double u = (x[c] - center[c]) / radius[c];
      if (std::fabs(u) >= 1.0) return 0.0;
      double w = 1.0 - u * u;
      v *= w * w * w * w;
    }
    return v;
  };
  auto cutoff_grad = [center, radius, d, cutoff](const Vec& x) {
    Vec g(d, 0.0);
    double v = cutoff(x);
    if (v == 0.0) return g;
    for (std::size_t c = 0; c < d; ++c) {
      double u = (x[c] - center[c]) / radius[c];
      double w = 1.0 - u * u;
      g[c] = v * (-8.0 * u / (w * radius[c]));
    }
    return g;
  };

  // tensor monomials of total degree <= 3
  std::vector<std::vector<int>> exps;
  std::function<void(std::vector<int>&, std::size_t, int)> gen = [&](std::vector<int>& cur,
                                                                     std::size_t c, int left) {
    if (c == d) {
      exps.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur[c] = e;
      gen(cur, c + 1, left - e);
    }
    cur[c] = 0;
  };
  std::vector<int> cur(d, 0);
  gen(cur, 0, 3);

  std::vector<TestField> fields;
  for (const auto& e : exps) {
    auto mono = [e, d](const Vec& x) {
      double v = 1;
      for (std::size_t c = 0; c < d; ++c)
        for (int k = 0; k < e[c]; ++k) v *= x[c];
      return v;
    };
    auto mono_grad = [e, d, mono](const Vec& x) {
      Vec g(d, 0.0);
      for (std::size_t c = 0; c < d; ++c) {
        if (e[c] == 0) continue;
        double v = double(e[c]);
        for (std::size_t cc = 0; cc < d; ++cc) {
          int pow = e[cc] - (cc == c ? 1 : 0);
          for (int k = 0; k < pow; ++k) v *= x[cc];
        }
        g[c] = v;
      }
      return g;
    };
    std::string name = "x^(";
    for (std::size_t c = 0; c < d; ++c) name += std::to_string(e[c]) + (c + 1 < d ? "," : ")");
    TestField f;
    f.name = name;
    f.value = [mono, cutoff](const Vec& x) { return mono(x) * cutoff(x); };
    f.grad = [mono, mono_grad, cutoff, cutoff_grad](const Vec& x) {
      double chi = cutoff(x);
      Vec g = chi * mono_grad(x);
      g += mono(x) * cutoff_grad(x);
      return g;
    };
    fields.push_back(std::move(f));
  }
  return fields;
}

std::vector<TestField> default_test_fields_for(const EnsemblePath& sigma) {
  sigma.validate();
  const std::size_t d = sigma.paths[0].positions[0].size();
  Vec lo(d, std::numeric_limits<double>::infinity());
  Vec hi(d, -std::numeric_limits<double>::infinity());
  for (const auto& path : sigma.paths)
    for (const auto& x : path.positions)
      for (std::size_t c = 0; c < d; ++c) {
        lo[c] = std::min(lo[c], x[c]);
        hi[c] = std::max(hi[c], x[c]);
      }
  return default_test_fields(lo, hi);
}

namespace {

// node velocities: central differences inside, 2nd-order one-sided at the ends
std::vector<Vec> node_velocities(const ParticlePath& path) {
  const std::size_t N = path.intervals();
  const double h = path.dt();
  std::vector<Vec> v(N + 1);
  v[0] = path.initial_velocity();
  for (std::size_t i = 1; i < N; ++i)
    v[i] = (0.5 / h) * (path.positions[i + 1] - path.positions[i - 1]);
  // 2nd-order one-sided at the terminal node
  if (N >= 2) {
    Vec vt(path.positions[0].size());
    for (std::size_t c = 0; c < vt.size(); ++c)
      vt[c] = (3.0 * path.positions[N][c] - 4.0 * path.positions[N - 1][c] +
               path.positions[N - 2][c]) /
              (2.0 * h);
    v[N] = vt;
  } else {
    v[N] = path.velocity(0);
  }
  return v;
}

}  // namespace

EulerPoissonResiduals euler_poisson_residual(const EnsemblePath& sigma, const ProblemSpec& spec,
                                             const std::vector<TestField>& tests) {
  sigma.validate();
  const std::size_t N = sigma.intervals();
  const std::size_t n = sigma.particles();
  const std::size_t d = sigma.paths[0].positions[0].size();
  const double h = sigma.dt();
  const double p = spec.p;

  std::vector<std::vector<Vec>> vel(n);
  for (std::size_t k = 0; k < n; ++k) vel[k] = node_velocities(sigma.paths[k]);

  EulerPoissonResiduals out;
  for (const auto& phi : tests) {
    // scalar moments and fluxes at nodes
    std::vector<double> M(N + 1, 0.0), F(N + 1, 0.0);
    // vector-test (phi e_c) moments, fluxes and forces
    std::vector<std::vector<double>> P(d, std::vector<double>(N + 1, 0.0));
    std::vector<std::vector<double>> PF(d, std::vector<double>(N + 1, 0.0));
    std::vector<std::vector<double>> FR(d, std::vector<double>(N + 1, 0.0));

    for (std::size_t i = 0; i <= N; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const Vec& x = sigma.paths[k].positions[i];
        const Vec& v = vel[k][i];
        double w = sigma.weights[k];
        double val = phi.value(x);
        Vec gphi = phi.grad(x);
        Vec mom = duality_map(v, p);
        Vec gV = spec.V.grad(x);
        M[i] += w * val;
        F[i] += w * dot(gphi, v);
        double gv = dot(gphi, v);
        for (std::size_t c = 0; c < d; ++c) {
          P[c][i] += w * val * mom[c];
          PF[c][i] += w * gv * mom[c];
          FR[c][i] += w * val * gV[c];
        }
      }
    }

    // centered time derivative at interior nodes; integrate |residual|
    double cont = 0;
    std::vector<double> momres(d, 0.0);
    for (std::size_t i = 1; i < N; ++i) {
      double dM = (M[i + 1] - M[i - 1]) / (2.0 * h);
      cont += std::fabs(dM - F[i]) * h;
      for (std::size_t c = 0; c < d; ++c) {
        double dP = (P[c][i + 1] - P[c][i - 1]) / (2.0 * h);
        momres[c] += std::fabs(dP - PF[c][i] + FR[c][i]) * h;
      }
    }
    out.continuity.push_back(cont);
    out.max_continuity = std::max(out.max_continuity, cont);
    for (std::size_t c = 0; c < d; ++c) {
      out.momentum.push_back(momres[c]);
      out.max_momentum = std::max(out.max_momentum, momres[c]);
    }
  }
  return out;
}

double optimality_condition_check(const EnsemblePath& sigma, const ProblemSpec& spec,
                                  const ValueEvaluator& u, double fd_step) {
  sigma.validate();
  const std::size_t N = sigma.intervals();
  const std::size_t d = sigma.paths[0].positions[0].size();
  const double p = spec.p;

  double worst = 0;
  for (std::size_t k = 0; k < sigma.particles(); ++k) {
    const auto& path = sigma.paths[k];
    for (std::size_t i = 0; i < N; ++i) {
      double s_mid = path.time(i) + 0.5 * path.dt();
      if (s_mid <= 0 || s_mid >= path.t_end) continue;  // interior only
      Vec mid = path.midpoint(i);
      Vec mom = duality_map(path.velocity(i), p);
      Vec grad_u(d);
      for (std::size_t c = 0; c < d; ++c) {
        Vec xp = mid, xm = mid;
        xp[c] += fd_step;
        xm[c] -= fd_step;
        grad_u[c] = (u(xp, s_mid) - u(xm, s_mid)) / (2.0 * fd_step);
      }
      worst = std::max(worst, sigma.weights[k] * norm2(mom - grad_u));
    }
  }
  return worst;
}

double boundary_momentum_check(const EnsemblePath& sigma, const ProblemSpec& spec) {
  sigma.validate();
  double worst = 0;
  for (std::size_t k = 0; k < sigma.particles(); ++k) {
    Vec v0 = sigma.paths[k].initial_velocity();
    Vec x0 = sigma.paths[k].positions.front();
    worst = std::max(worst, norm2(duality_map(v0, spec.p) - spec.g.grad(x0)));
  }
  return worst;
}

}  // namespace wvf
