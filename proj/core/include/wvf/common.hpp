// Small dense vector helpers and the error hierarchy shared by all modules.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wvf {

using Vec = std::vector<double>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyMeasure : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct SolverFailure : Error {
  using Error::Error;
};
struct TooLarge : Error {
  using Error::Error;
};
struct NonUniform : Error {
  using Error::Error;
};
struct NotOptimal : Error {
  using Error::Error;
};
struct HorizonExceeded : Error {
  using Error::Error;
};
struct NoConvergence : Error {
  using Error::Error;
};
struct BeyondBlowup : Error {
  using Error::Error;
};
struct DualityDegenerate : Error {
  using Error::Error;
};
struct NotSuperlinear : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec operator+(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec operator*(double c, const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

inline Vec& operator+=(Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline Vec& operator-=(Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

// |v|^{p-2} v, with the p < 2 singularity at v = 0 mapped to 0.
inline Vec duality_map(const Vec& v, double p) {
  double n = norm2(v);
  if (n == 0.0) return Vec(v.size(), 0.0);
  return std::pow(n, p - 2.0) * v;
}

inline double conjugate_exponent(double p) { return p / (p - 1.0); }

inline double pow_abs(double x, double e) { return std::pow(std::fabs(x), e); }

}  // namespace wvf
