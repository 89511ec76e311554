#pragma once

#include <cstddef>
#include <vector>

#include "nlsb/radial_shooting.hpp"

namespace nlsb {

/// Positive radial solution of -U'' - (N-1)/r U' + U = mu U^p.
struct GroundState {
  int dimension = 1;
  double exponent = 0.0;
  double coefficient = 1.0;
  RadialProfile profile;
  double mass = 0.0;
  double central_value = 0.0;
};

/// Shoots g = mu s^p at lambda = 1. Results are memoized per
/// (N, p, mu, controls); the returned state is a copy.
/// Throws Error(Domain) unless 1 < p < 2* - 1 and mu > 0.
GroundState kwong_ground_state(int dimension, double exponent, double coefficient,
                               const ShootingControls& controls = {});

/// U^mu = mu^{1/(1-p)} U for a base state computed with mu = 1.
GroundState scale_by_mu(const GroundState& base, double coefficient);

/// lambda^{(4 - (p-1)N) / (2(p-1))}.
double pure_power_mass_factor(int dimension, double exponent, double lambda);

/// mu^{-N/2} ||U_{1+4/N}||_2^2.
double critical_mass_threshold(int dimension, double coefficient,
                               const ShootingControls& controls = {});

/// Decay amplitudes of mu s^p at lambda = 1 found by scanning
/// [0.99 s0, 1000 s0] on a log grid.
std::vector<double> uniqueness_probe(int dimension, double exponent, double coefficient,
                                     int points = 400, const ShootingControls& controls = {});

std::size_t ground_state_cache_size();
void clear_ground_state_cache();

}  // namespace nlsb
