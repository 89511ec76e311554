#pragma once

#include <span>
#include <vector>

namespace nlsb {

/// Integral of tabulated samples f(x_i) over [x_0, x_n] for strictly
/// increasing, not necessarily uniform, nodes. Consecutive groups of five
/// nodes are replaced by their interpolating quartic and integrated exactly;
/// on a uniform grid this is composite Boole. Leftover intervals use the
/// quartic through the last five nodes. Sums in fixed index order.
double integrate_samples(std::span<const double> x, std::span<const double> f);

/// Gauss-Laguerre rule for int_0^inf e^{-t} h(t) dt.
struct GaussLaguerreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussLaguerreRule& gauss_laguerre(int n = 32);

/// int_R^inf e^{-c r} r^q dr for c > 0, R > 0, i.e. c^{-(q+1)} Gamma(q+1, cR),
/// evaluated with Gauss-Laguerre after shifting to the lower limit.
double exp_power_tail(double c, double q, double radius);

/// e^{cR} times exp_power_tail(c, q, R); safe when e^{-cR} would underflow.
double shifted_exp_power_tail(double c, double q, double radius);

}  // namespace nlsb
