#include "nlsb/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "nlsb/quadrature.hpp"

namespace nlsb {

double sphere_measure(int dimension) {
  if (dimension < 1) throw Error(ErrorCode::Domain, "dimension must be at least 1");
  const double half = 0.5 * dimension;
  return 2.0 * std::pow(M_PI, half) / std::tgamma(half);
}

namespace {

// int_{r_n}^inf u(r)^j r^{N-1} dr along the tail, u(r) = u_n e^{-k(r-r_n)} (r_n/r)^m.
double tail_power_integral(const RadialProfile& p, double j) {
  const auto& tail = *p.tail;
  const double rn = p.r.back();
  const double base = tail.value(rn) * std::pow(rn, tail.power);
  const double q = (p.dimension - 1.0) - j * tail.power;
  return std::pow(base, j) * shifted_exp_power_tail(j * tail.rate, q, rn);
}

void require_tail(const RadialProfile& p) {
  if (!p.tail) throw Error(ErrorCode::MissingTail, "profile has no tail; integrals refused");
}

template <class F>
double node_integral(const RadialProfile& p, F&& integrand) {
  std::vector<double> f(p.r.size());
  for (std::size_t i = 0; i < p.r.size(); ++i) {
    f[i] = integrand(i) * std::pow(p.r[i], p.dimension - 1);
  }
  return integrate_samples(p.r, f);
}

}  // namespace

double compute_mass(const RadialProfile& p, bool include_tail) {
  double total = node_integral(p, [&](std::size_t i) { return p.u[i] * p.u[i]; });
  if (include_tail) {
    require_tail(p);
    total += tail_power_integral(p, 2.0);
  }
  return sphere_measure(p.dimension) * total;
}

double compute_kinetic(const RadialProfile& p, bool include_tail) {
  double total = node_integral(p, [&](std::size_t i) { return p.du[i] * p.du[i]; });
  if (include_tail) {
    require_tail(p);
    // u'^2 = u^2 (k + m/r)^2
    const auto& tail = *p.tail;
    const double rn = p.r.back();
    const double base = tail.value(rn) * std::pow(rn, tail.power);
    const double k = tail.rate, m = tail.power;
    const double c = 2.0 * k;
    double part = k * k * shifted_exp_power_tail(c, 0.0, rn);
    if (m != 0.0) {
      part += 2.0 * k * m * shifted_exp_power_tail(c, -1.0, rn) +
              m * m * shifted_exp_power_tail(c, -2.0, rn);
    }
    total += base * base * part;
  }
  return sphere_measure(p.dimension) * total;
}

double compute_potential(const RadialProfile& p, bool include_tail) {
  double total = node_integral(p, [&](std::size_t i) { return eval_G(p.spec, p.u[i]); });
  if (include_tail) {
    require_tail(p);
    for (const auto& t : p.spec.terms()) {
      total += t.coefficient / (t.exponent + 1.0) * tail_power_integral(p, t.exponent + 1.0);
    }
  }
  return sphere_measure(p.dimension) * total;
}

double compute_nehari_integral(const RadialProfile& p, bool include_tail) {
  double total = node_integral(p, [&](std::size_t i) { return eval_g(p.spec, p.u[i]) * p.u[i]; });
  if (include_tail) {
    require_tail(p);
    for (const auto& t : p.spec.terms()) {
      total += t.coefficient * tail_power_integral(p, t.exponent + 1.0);
    }
  }
  return sphere_measure(p.dimension) * total;
}

double compute_action(const RadialProfile& p) {
  return 0.5 * (compute_kinetic(p) + p.lambda * compute_mass(p)) - compute_potential(p);
}

namespace {

double poho(int n, double lambda, double mass, double kinetic, double potential) {
  const double nn = n;
  return std::abs(0.5 * (nn - 2.0) * kinetic + 0.5 * nn * lambda * mass - nn * potential) /
         (nn * potential);
}

double nehari(double lambda, double mass, double kinetic, double gu) {
  return std::abs(kinetic + lambda * mass - gu) / (kinetic + lambda * mass);
}

double gap(int n, double action, double kinetic) {
  const double level = kinetic / n;
  return std::abs(action - level) / std::max(action, level);
}

}  // namespace

double pohozaev_residual(const RadialProfile& p) {
  return poho(p.dimension, p.lambda, compute_mass(p), compute_kinetic(p), compute_potential(p));
}

double nehari_residual(const RadialProfile& p) {
  return nehari(p.lambda, compute_mass(p), compute_kinetic(p), compute_nehari_integral(p));
}

double mp_gap(const RadialProfile& p) { return gap(p.dimension, compute_action(p), compute_kinetic(p)); }

BranchPoint evaluate_branch_point(const RadialProfile& p) {
  BranchPoint b;
  b.lambda = p.lambda;
  b.mass = compute_mass(p);
  b.kinetic = compute_kinetic(p);
  b.potential = compute_potential(p);
  b.sup = p.u.front();
  b.action = 0.5 * (b.kinetic + p.lambda * b.mass) - b.potential;
  b.pohozaev_residual = poho(p.dimension, p.lambda, b.mass, b.kinetic, b.potential);
  b.nehari_residual = nehari(p.lambda, b.mass, b.kinetic, compute_nehari_integral(p));
  b.mp_gap = gap(p.dimension, b.action, b.kinetic);
  return b;
}

bool within_gates(const BranchPoint& b, const DiagnosticGates& gates) {
  return b.valid && b.pohozaev_residual < gates.pohozaev && b.nehari_residual < gates.nehari &&
         b.mp_gap < gates.mp_gap;
}

namespace {

double pohozaev_at(const Trajectory& tr, double r, double u, double du) {
  const double n = tr.dimension;
  const double f = 0.5 * du * du + eval_G(tr.spec, std::max(u, 0.0)) - 0.5 * tr.lambda * u * u;
  return std::pow(r, n) * f + 0.5 * (n - 2.0) * std::pow(r, n - 1.0) * u * du;
}

}  // namespace

double pohozaev_function(const Trajectory& tr, double r) {
  const auto& s = tr.samples;
  if (s.empty() || r < 0.0 || r > s.back().r) {
    throw Error(ErrorCode::Domain, "radius outside the sampled trajectory");
  }
  if (r == 0.0) return 0.0;
  const auto it = std::lower_bound(s.begin(), s.end(), r,
                                   [](const TrajectorySample& a, double x) { return a.r < x; });
  if (it->r == r) return pohozaev_at(tr, r, it->u, it->du);
  const auto& a = *(it - 1);
  const auto& b = *it;
  // cubic Hermite for u, linear for u'
  const double h = b.r - a.r;
  const double t = (r - a.r) / h;
  const double u = (1 + 2 * t) * (1 - t) * (1 - t) * a.u + t * (1 - t) * (1 - t) * h * a.du +
                   t * t * (3 - 2 * t) * b.u + t * t * (t - 1) * h * b.du;
  const double du = (1 - t) * a.du + t * b.du;
  return pohozaev_at(tr, r, u, du);
}

std::vector<double> pohozaev_function_samples(const Trajectory& tr) {
  std::vector<double> out;
  out.reserve(tr.samples.size());
  for (const auto& s : tr.samples) out.push_back(pohozaev_at(tr, s.r, s.u, s.du));
  return out;
}

double pohozaev_function(const RadialProfile&, double) {
  throw Error(ErrorCode::Domain,
              "the Pohozaev function is defined on raw trajectories; integrate one with "
              "integrate_trajectory");
}

}  // namespace nlsb
