#pragma once

#include <string>
#include <vector>

#include "nlsb/radial_shooting.hpp"

namespace nlsb {

/// Scalar observables of one solution at frequency lambda.
struct BranchPoint {
  double lambda = 0.0;
  double mass = 0.0;
  double kinetic = 0.0;
  double sup = 0.0;
  double potential = 0.0;
  double action = 0.0;
  double pohozaev_residual = 0.0;
  double nehari_residual = 0.0;
  double mp_gap = 0.0;
  /// False for grid points whose shoot failed; the message says why.
  bool valid = true;
  std::string message;
};

/// Surface measure of the unit sphere in R^N, 2 pi^{N/2} / Gamma(N/2).
double sphere_measure(int dimension);

// Integral observables. With include_tail the closed-form tail beyond the
// last node is added and a profile without a tail is refused (MissingTail);
// without it only the node range is integrated.
double compute_mass(const RadialProfile& profile, bool include_tail = true);
double compute_kinetic(const RadialProfile& profile, bool include_tail = true);
/// P_G = int G(u).
double compute_potential(const RadialProfile& profile, bool include_tail = true);
/// int g(u) u.
double compute_nehari_integral(const RadialProfile& profile, bool include_tail = true);
/// J = (K + lambda rho)/2 - P_G.
double compute_action(const RadialProfile& profile);

double pohozaev_residual(const RadialProfile& profile);
double nehari_residual(const RadialProfile& profile);
double mp_gap(const RadialProfile& profile);

/// All of the above in one pass.
BranchPoint evaluate_branch_point(const RadialProfile& profile);

struct DiagnosticGates {
  double pohozaev = 1e-5;
  double nehari = 1e-5;
  double mp_gap = 1e-5;
};

bool within_gates(const BranchPoint& point, const DiagnosticGates& gates = {});

/// P(r) = r^N (u'^2/2 + G(u) - lambda u^2/2) + ((N-2)/2) r^{N-1} u u' along
/// a raw trajectory; P(0) = 0.
double pohozaev_function(const Trajectory& trajectory, double r);
std::vector<double> pohozaev_function_samples(const Trajectory& trajectory);

/// Profiles are decaying solutions at lambda > 0, not raw trajectories;
/// always throws Error(Domain).
double pohozaev_function(const RadialProfile& profile, double r);

}  // namespace nlsb
