#include "wvf/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wvf {

namespace {

double ground_cost(const Vec& x, const Vec& y, double p) { return std::pow(norm2(x - y), p); }

// Transportation simplex on a dense cost matrix. Supplies are perturbed to
// break degeneracy; basic masses are recomputed from the unperturbed
// marginals on the final basis tree.
class TransportSimplex {
 public:
  TransportSimplex(std::vector<double> a, std::vector<double> b, std::vector<double> cost)
      : n_(a.size()), m_(b.size()), a_(std::move(a)), b_(std::move(b)), cost_(std::move(cost)) {}

  // Returns the optimal mass matrix (row-major n x m).
  std::vector<double> solve() {
    perturb();
    northwest_corner();
    const double cmax = *std::max_element(cost_.begin(), cost_.end());
    const double rc_tol = 1e-12 * std::max(1.0, cmax);
    const std::size_t max_iter = 200 * (n_ + m_) * (n_ + m_) + 1000;

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
      compute_potentials();
      std::size_t ei = 0, ej = 0;
      double best = -rc_tol;
      bool found = false;
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < m_; ++j) {
          if (basic_[i * m_ + j]) continue;
          double rc = cost_[i * m_ + j] - u_[i] - v_[j];
          if (rc < best) {
            best = rc;
            ei = i;
            ej = j;
            found = true;
          }
        }
      if (!found) {
        restore_unperturbed();
        return mass_;
      }
      pivot(ei, ej);
    }
    throw SolverFailure("transport simplex exceeded the iteration cap");
  }

 private:
  std::size_t n_, m_;
  std::vector<double> a_, b_, cost_;
  std::vector<double> mass_;
  std::vector<char> basic_;
  std::vector<double> u_, v_;
  std::vector<double> a0_, b0_;  // unperturbed marginals

  void perturb() {
    a0_ = a_;
    b0_ = b_;
    const double eps = 1e-11;
    double extra = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      a_[i] += eps * double(i + 1);
      extra += eps * double(i + 1);
    }
    b_[m_ - 1] += extra;
  }

  void northwest_corner() {
    mass_.assign(n_ * m_, 0.0);
    basic_.assign(n_ * m_, 0);
    std::vector<double> a = a_, b = b_;
    std::size_t i = 0, j = 0;
    while (i < n_ && j < m_) {
      double t = std::min(a[i], b[j]);
      mass_[i * m_ + j] = t;
      basic_[i * m_ + j] = 1;
      a[i] -= t;
      b[j] -= t;
      // keep exactly n+m-1 basics: advance one index per step
      if (i + 1 == n_ && j + 1 == m_) break;
      if (a[i] <= b[j] && i + 1 < n_)
        ++i;
      else
        ++j;
    }
  }

  // Node ids: rows 0..n-1, cols n..n+m-1. The basis forms a spanning tree.
  void compute_potentials() {
    u_.assign(n_, 0.0);
    v_.assign(m_, 0.0);
    std::vector<char> seen(n_ + m_, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      std::size_t node = stack.back();
      stack.pop_back();
      if (node < n_) {
        std::size_t i = node;
        for (std::size_t j = 0; j < m_; ++j)
          if (basic_[i * m_ + j] && !seen[n_ + j]) {
            v_[j] = cost_[i * m_ + j] - u_[i];
            seen[n_ + j] = 1;
            stack.push_back(n_ + j);
          }
      } else {
        std::size_t j = node - n_;
        for (std::size_t i = 0; i < n_; ++i)
          if (basic_[i * m_ + j] && !seen[i]) {
            u_[i] = cost_[i * m_ + j] - v_[j];
            seen[i] = 1;
            stack.push_back(i);
          }
      }
    }
  }

  // Path between two nodes of the basis tree via DFS parent pointers.
  std::vector<std::size_t> tree_path(std::size_t from, std::size_t to) const {
    std::vector<std::ptrdiff_t> parent(n_ + m_, -2);
    std::vector<std::size_t> stack{from};
    parent[from] = -1;
    while (!stack.empty()) {
      std::size_t node = stack.back();
      stack.pop_back();
      if (node == to) break;
      if (node < n_) {
        for (std::size_t j = 0; j < m_; ++j)
          if (basic_[node * m_ + j] && parent[n_ + j] == -2) {
            parent[n_ + j] = std::ptrdiff_t(node);
            stack.push_back(n_ + j);
          }
      } else {
        std::size_t j = node - n_;
        for (std::size_t i = 0; i < n_; ++i)
          if (basic_[i * m_ + j] && parent[i] == -2) {
            parent[i] = std::ptrdiff_t(node);
            stack.push_back(i);
          }
      }
    }
    std::vector<std::size_t> path;
    for (std::ptrdiff_t at = std::ptrdiff_t(to); at != -1; at = parent[at])
      path.push_back(std::size_t(at));
    std::reverse(path.begin(), path.end());
    return path;
  }

  void pivot(std::size_t ei, std::size_t ej) {
    // Cycle: entering cell plus the tree path from row ei to col ej.
    auto path = tree_path(ei, n_ + ej);
    // Cells along the path; signs alternate starting with - (the first path
    // edge shares row ei with the entering + cell).
    struct Cell {
      std::size_t i, j;
      int sign;
    };
    std::vector<Cell> cells;
    int sign = -1;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      std::size_t x = path[k], y = path[k + 1];
      std::size_t i = x < n_ ? x : y;
      std::size_t j = x < n_ ? y - n_ : x - n_;
      cells.push_back({i, j, sign});
      sign = -sign;
    }
    double theta = std::numeric_limits<double>::infinity();
    std::size_t leave = 0;
    for (std::size_t k = 0; k < cells.size(); ++k)
      if (cells[k].sign < 0 && mass_[cells[k].i * m_ + cells[k].j] < theta) {
        theta = mass_[cells[k].i * m_ + cells[k].j];
        leave = k;
      }
    mass_[ei * m_ + ej] += theta;
    basic_[ei * m_ + ej] = 1;
    for (auto& c : cells) mass_[c.i * m_ + c.j] += c.sign * theta;
    basic_[cells[leave].i * m_ + cells[leave].j] = 0;
    mass_[cells[leave].i * m_ + cells[leave].j] = 0;
  }

  // Re-solve the basic masses against the unperturbed marginals by leaf
  // stripping on the basis tree; O(eps) negatives are clamped.
  void restore_unperturbed() {
    std::vector<double> rowrem = a0_, colrem = b0_;
    std::vector<std::size_t> rowdeg(n_, 0), coldeg(m_, 0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < m_; ++j)
        if (basic_[i * m_ + j]) {
          ++rowdeg[i];
          ++coldeg[j];
        }
    std::vector<char> alive(n_ * m_, 0);
    for (std::size_t k = 0; k < n_ * m_; ++k) alive[k] = basic_[k];
    std::fill(mass_.begin(), mass_.end(), 0.0);

    std::size_t remaining = 0;
    for (char c : alive) remaining += c;
    while (remaining > 0) {
      bool progressed = false;
      for (std::size_t i = 0; i < n_ && remaining > 0; ++i) {
        if (rowdeg[i] != 1) continue;
        for (std::size_t j = 0; j < m_; ++j)
          if (alive[i * m_ + j]) {
            mass_[i * m_ + j] = std::max(0.0, rowrem[i]);
            colrem[j] -= rowrem[i];
            rowrem[i] = 0;
            alive[i * m_ + j] = 0;
            --rowdeg[i];
            --coldeg[j];
            --remaining;
            progressed = true;
            break;
          }
      }
      for (std::size_t j = 0; j < m_ && remaining > 0; ++j) {
        if (coldeg[j] != 1) continue;
        for (std::size_t i = 0; i < n_; ++i)
          if (alive[i * m_ + j]) {
            mass_[i * m_ + j] = std::max(0.0, colrem[j]);
            rowrem[i] -= colrem[j];
            colrem[j] = 0;
            alive[i * m_ + j] = 0;
            --rowdeg[i];
            --coldeg[j];
            --remaining;
            progressed = true;
            break;
          }
      }
      if (!progressed) throw SolverFailure("basis is not a tree");
    }
  }
};

}  // namespace

double TransportPlan::cost() const {
  double s = 0;
  for (std::size_t i = 0; i < source.size(); ++i)
    for (std::size_t j = 0; j < target.size(); ++j)
      if (at(i, j) > 0) s += at(i, j) * ground_cost(source.point(i), target.point(j), cost_exponent);
  return s;
}

void TransportPlan::check_marginals(double tol) const {
  for (std::size_t i = 0; i < source.size(); ++i) {
    double r = 0;
    for (std::size_t j = 0; j < target.size(); ++j) {
      if (at(i, j) < -tol) throw ValidationError("negative plan entry");
      r += at(i, j);
    }
    if (std::fabs(r - source.weight(i)) > tol) throw ValidationError("row marginal mismatch");
  }
  for (std::size_t j = 0; j < target.size(); ++j) {
    double c = 0;
    for (std::size_t i = 0; i < source.size(); ++i) c += at(i, j);
    if (std::fabs(c - target.weight(j)) > tol) throw ValidationError("column marginal mismatch");
  }
}

WassersteinResult wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  if (mu.dim() != nu.dim()) throw DimensionMismatch("measures live in different dimensions");
  const std::size_t n = mu.size(), m = nu.size();
  std::vector<double> cost(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) cost[i * m + j] = ground_cost(mu.point(i), nu.point(j), p);

  TransportSimplex simplex(mu.weights(), nu.weights(), cost);
  TransportPlan plan{mu, nu, simplex.solve(), p};
  double total = 0;
  for (std::size_t k = 0; k < n * m; ++k) total += plan.mass[k] * cost[k];
  return {std::pow(std::max(0.0, total), 1.0 / p), std::move(plan)};
}

double wasserstein_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  return wasserstein(mu, nu, p).distance;
}

double brute_force_wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  const std::size_t n = mu.size();
  if (n != nu.size()) throw NonUniform("particle counts differ");
  if (n > 8) throw TooLarge("brute force limited to n <= 8");
  for (std::size_t i = 0; i < n; ++i)
    if (std::fabs(mu.weight(i) - 1.0 / double(n)) > 1e-12 ||
        std::fabs(nu.weight(i) - 1.0 / double(n)) > 1e-12)
      throw NonUniform("weights are not uniform");

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += ground_cost(mu.point(i), nu.point(perm[i]), p);
    best = std::min(best, s / double(n));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::pow(best, 1.0 / p);
}

bool is_optimal_plan(const TransportPlan& plan, double tol) {
  plan.check_marginals();
  double optimal = wasserstein(plan.source, plan.target, plan.cost_exponent).plan.cost();
  return plan.cost() <= optimal + tol;
}

DiscreteMeasure displacement_interpolate(const TransportPlan& plan, double s,
                                         bool caller_certified_optimal) {
  if (!caller_certified_optimal) throw NotOptimal("plan must be certified optimal by the caller");
  std::vector<Vec> pts;
  std::vector<double> wts;
  for (std::size_t i = 0; i < plan.source.size(); ++i)
    for (std::size_t j = 0; j < plan.target.size(); ++j) {
      double m = plan.at(i, j);
      if (m > 1e-15) {
        pts.push_back((1.0 - s) * plan.source.point(i) + s * plan.target.point(j));
        wts.push_back(m);
      }
    }
  return DiscreteMeasure(std::move(pts), std::move(wts));
}

}  // namespace wvf
