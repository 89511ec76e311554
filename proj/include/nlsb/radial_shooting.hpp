#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlsb/error.hpp"
#include "nlsb/nonlinearity.hpp"

namespace nlsb {

/// Knobs for a single shoot. Radii and spacings are given in the scaled
/// variable t = sqrt(lambda) r, in which every frequency looks alike.
struct ShootingControls {
  /// Relative local error per step of the Runge-Kutta integrator.
  double step_tolerance = 1e-13;
  /// R_max = max_scaled_radius / sqrt(lambda).
  double max_scaled_radius = 200.0;
  /// Relative width of the final amplitude bracket.
  double amplitude_tolerance = 1e-12;
  /// Decay is declared once u < decay_threshold * xi inside the cone.
  double decay_threshold = 1e-4;
  /// Half-width of the decay cone around the linearized log-derivative.
  double cone_width = 1e-2;
  /// Hard cap u > divergence_threshold * xi.
  double divergence_threshold = 1e3;
  /// Spacing of the recorded profile nodes, in units of 1/sqrt(lambda + g'(xi)).
  double node_spacing = 0.01;
  /// Launch radius h = launch_scale / sqrt(lambda + g'(xi)).
  double launch_scale = 1e-4;

  void validate() const;
  /// Stable text key, used for memoization.
  std::string fingerprint() const;
};

enum class ShootingStatus { Decay, Crossing, Divergence, Indeterminate };

const char* to_string(ShootingStatus status);

struct TrajectorySample {
  double r;
  double u;
  double du;
};

struct ShootingOutcome {
  ShootingStatus status = ShootingStatus::Indeterminate;
  /// r_cross, r_div, the decay radius, or R_max.
  double event_radius = 0.0;
  std::vector<TrajectorySample> samples;
};

/// Thrown when the integrator step collapses; carries the last state.
class StiffnessError : public Error {
 public:
  StiffnessError(const std::string& message, TrajectorySample last)
      : Error(ErrorCode::Stiffness, message), last_(last) {}
  const TrajectorySample& last_state() const { return last_; }

 private:
  TrajectorySample last_;
};

/// u(r) ~ amplitude * exp(-rate r) * r^(-power) for r >= radius.
struct ExponentialTail {
  double radius = 0.0;
  double amplitude = 0.0;
  double rate = 0.0;
  double power = 0.0;

  double value(double r) const;
  double derivative(double r) const;
};

/// A positive, decreasing radial solution sampled on [0, R] with an
/// exponential tail beyond R.
struct RadialProfile {
  NonlinearitySpec spec;
  int dimension = 1;
  double lambda = 1.0;
  double xi = 0.0;
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> du;
  std::optional<ExponentialTail> tail;
  /// max |ODE residual| / (lambda u(0)) over interior nodes.
  double residual_max = 0.0;
  int shoots = 0;
  std::vector<std::string> warnings;

  double match_radius() const { return r.back(); }
  /// Cubic Hermite inside the node range, tail formula beyond it.
  double value_at(double radius) const;
  double derivative_at(double radius) const;
};

/// Fourth-order Taylor launch (u(h), u'(h)) from u(0) = xi, u'(0) = 0.
/// Accepts lambda >= 0 so zero-frequency trajectories can be launched too.
TrajectorySample series_start(const NonlinearitySpec& spec, int dimension, double lambda,
                              double xi, double h);

/// Default launch radius for (lambda, xi).
double launch_radius(const NonlinearitySpec& spec, double lambda, double xi,
                     const ShootingControls& controls = {});

/// Integrates the radial equation from u(0) = xi. With detect_decay false
/// the run only ends on a crossing, a turn-around (u' > 0 while u > 0,
/// reported as Divergence) or R_max. Samples are recorded on the node grid
/// when record is set.
ShootingOutcome integrate_ivp(const NonlinearitySpec& spec, int dimension, double lambda,
                              double xi, const ShootingControls& controls = {},
                              bool detect_decay = true, bool record = true);

/// Smallest s > 0 with G(s) = lambda s^2 / 2.
double first_positive_root_F(const NonlinearitySpec& spec, double lambda);

/// Positive decaying solution at frequency lambda, tail attached.
/// For N = 1 the amplitude is first_positive_root_F exactly; otherwise the
/// amplitude is bisected on a dyadic grid in log2(xi / s0) so that the
/// result does not depend on the hint, which only shortens the search.
RadialProfile shoot_ground(const NonlinearitySpec& spec, int dimension, double lambda,
                           const ShootingControls& controls = {},
                           std::optional<double> hint = std::nullopt);

/// Fits C, rate so that u and u' are continuous at the last node.
/// Throws MissingTail if the last node is not positive and decreasing.
void attach_exponential_tail(RadialProfile& profile);

/// Appends tail-formula nodes at the existing spacing up to radius.
void extend_tail_nodes(RadialProfile& profile, double radius);

/// All amplitudes in [xi_lo, xi_hi] at which the trajectory switches from
/// turning around to crossing zero, each refined to the amplitude tolerance.
std::vector<double> scan_decay_amplitudes(const NonlinearitySpec& spec, int dimension,
                                          double lambda, double xi_lo, double xi_hi,
                                          int points, const ShootingControls& controls = {});

/// A raw trajectory of -u'' - (N-1)u'/r + lambda u = g(u), lambda >= 0,
/// sampled every dr up to r_end or the first zero of u.
struct Trajectory {
  NonlinearitySpec spec;
  int dimension = 1;
  double lambda = 0.0;
  std::vector<TrajectorySample> samples;
  bool crossed = false;
};

Trajectory integrate_trajectory(const NonlinearitySpec& spec, int dimension, double lambda,
                                double xi, double r_end, double dr,
                                const ShootingControls& controls = {});

}  // namespace nlsb
