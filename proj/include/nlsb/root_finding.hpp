#pragma once

#include <cmath>
#include <optional>
#include <utility>

namespace nlsb {

struct RootResult {
  double x;
  double fx;
  int evaluations;
};

/// Brent's method on a bracket [a, b] with f(a) f(b) <= 0. Stops when the
/// bracket is narrower than xtol or |f| <= ftol.
template <class F>
RootResult brent_root(F&& f, double a, double b, double fa, double fb, double xtol, double ftol,
                      int max_iter = 200) {
  int evals = 0;
  if (fa == 0.0) return {a, fa, evals};
  if (fb == 0.0) return {b, fb, evals};
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || std::abs(fb) <= ftol) return {b, fb, evals};
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
    ++evals;
  }
  return {b, fb, evals};
}

/// Plain bisection on a sign change, to |b - a| <= xtol.
template <class F>
double bisect_root(F&& f, double a, double b, double xtol, int max_iter = 400) {
  double fa = f(a);
  for (int it = 0; it < max_iter && std::abs(b - a) > xtol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// Abscissa of the vertex of the parabola through three points, if the
/// points are not collinear.
inline std::optional<double> parabolic_vertex(double x0, double f0, double x1, double f1, double x2,
                                              double f2) {
  const double num = (x1 - x0) * (x1 - x0) * (f1 - f2) - (x1 - x2) * (x1 - x2) * (f1 - f0);
  const double den = (x1 - x0) * (f1 - f2) - (x1 - x2) * (f1 - f0);
  if (den == 0.0) return std::nullopt;
  return x1 - 0.5 * num / den;
}

/// Golden-section search for a maximum of f on [a, b]. Returns (x, f(x)).
template <class F>
std::pair<double, double> golden_section_max(F&& f, double a, double b, double xtol,
                                             int max_iter = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace nlsb
