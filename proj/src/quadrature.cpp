#include "nlsb/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>

#include "nlsb/error.hpp"

namespace nlsb {

namespace {

// 3-point Gauss-Legendre on [-1, 1]; exact through degree 5.
constexpr std::array<double, 3> kGlNodes = {-0.774596669241483377035853079956, 0.0,
                                            0.774596669241483377035853079956};
constexpr std::array<double, 3> kGlWeights = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

double lagrange_eval(std::span<const double> x, std::span<const double> f, double t) {
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    double basis = 1.0;
    for (std::size_t m = 0; m < x.size(); ++m) {
      if (m != k) basis *= (t - x[m]) / (x[k] - x[m]);
    }
    sum += f[k] * basis;
  }
  return sum;
}

// Integral over [x[first], x[last]] of the polynomial through all of (x, f).
double integrate_interpolant(std::span<const double> x, std::span<const double> f,
                             std::size_t first, std::size_t last) {
  double total = 0.0;
  for (std::size_t j = first; j < last; ++j) {
    const double mid = 0.5 * (x[j] + x[j + 1]);
    const double half = 0.5 * (x[j + 1] - x[j]);
    double part = 0.0;
    for (std::size_t q = 0; q < kGlNodes.size(); ++q) {
      part += kGlWeights[q] * lagrange_eval(x, f, mid + half * kGlNodes[q]);
    }
    total += half * part;
  }
  return total;
}

}  // namespace

double integrate_samples(std::span<const double> x, std::span<const double> f) {
  if (x.size() != f.size()) throw Error(ErrorCode::Domain, "integrate_samples: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x[i] > x[i - 1])) throw Error(ErrorCode::Domain, "integrate_samples: nodes not increasing");
  }
  if (n < 5) return integrate_interpolant(x, f, 0, n - 1);

  double total = 0.0;
  std::size_t i = 0;
  for (; i + 4 < n; i += 4) {
    total += integrate_interpolant(x.subspan(i, 5), f.subspan(i, 5), 0, 4);
  }
  if (i < n - 1) {
    // leftover intervals [x_i, x_{n-1}] using the last five nodes
    const std::size_t base = n - 5;
    total += integrate_interpolant(x.subspan(base, 5), f.subspan(base, 5), i - base, 4);
  }
  return total;
}

namespace {

GaussLaguerreRule build_gauss_laguerre(int n) {
  GaussLaguerreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      z = 3.0 / (1.0 + 2.4 * n);
    } else if (i == 1) {
      z += 15.0 / (1.0 + 2.5 * n);
    } else {
      const double ai = i - 1;
      z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - rule.nodes[static_cast<std::size_t>(i - 2)]);
    }
    double p1 = 1.0, p2 = 0.0, pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      p1 = 1.0;
      p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0 - z) * p2 - (j - 1.0) * p3) / j;
      }
      pp = (n * p1 - n * p2) / z;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::abs(z)) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = z;
    rule.weights[static_cast<std::size_t>(i)] = -1.0 / (pp * n * p2);
  }
  return rule;
}

}  // namespace

const GaussLaguerreRule& gauss_laguerre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussLaguerreRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_gauss_laguerre(n)).first;
  return it->second;
}

double shifted_exp_power_tail(double c, double q, double radius) {
  if (!(c > 0.0) || !(radius > 0.0)) {
    throw Error(ErrorCode::Domain, "exp_power_tail needs c > 0 and R > 0");
  }
  const double lead = std::pow(radius, q) / c;
  if (q == 0.0) return lead;
  const auto& rule = gauss_laguerre();
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * std::pow(1.0 + rule.nodes[i] / (c * radius), q);
  }
  return lead * sum;
}

double exp_power_tail(double c, double q, double radius) {
  return std::exp(-c * radius) * shifted_exp_power_tail(c, q, radius);
}

}  // namespace nlsb
