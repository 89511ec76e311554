#pragma once

// Generators and reference computations shared by the tests. Nothing here
// calls into the library, so the oracles stay independent of it.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace testing {

class Gen {
 public:
  explicit Gen(std::uint32_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

 private:
  std::mt19937 rng_;
};

inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 40) {
  const auto rule = [&](double l, double r) {
    return (r - l) / 6.0 * (f(l) + 4.0 * f(0.5 * (l + r)) + f(r));
  };
  std::function<double(double, double, double, double, int)> rec =
      [&](double l, double r, double whole, double eps, int d) {
        const double m = 0.5 * (l + r);
        const double left = rule(l, m), right = rule(m, r);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
          return left + right + (left + right - whole) / 15.0;
        }
        return rec(l, m, left, 0.5 * eps, d - 1) + rec(m, r, right, 0.5 * eps, d - 1);
      };
  return rec(a, b, rule(a, b), tol, depth);
}

/// Surface area of the unit sphere in R^N by the recursion
/// |S^{N-1}| = 2 pi / (N - 2) |S^{N-3}|.
inline double sphere_area(int n) {
  if (n == 1) return 2.0;
  if (n == 2) return 2.0 * M_PI;
  return 2.0 * M_PI / (n - 2) * sphere_area(n - 2);
}

/// Least-squares slope of y against x.
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

/// Closed-form soliton of -u'' + lambda u = u^3 on the line.
inline double cubic_soliton(double lambda, double r) {
  return std::sqrt(2.0 * lambda) / std::cosh(std::sqrt(lambda) * r);
}

/// Closed-form soliton of -u'' + u = u^5 on the line.
inline double quintic_soliton(double r) { return std::pow(3.0, 0.25) / std::sqrt(std::cosh(2.0 * r)); }

}  // namespace testing
