#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlsb/diagnostics.hpp"
#include "nlsb/radial_shooting.hpp"

namespace nlsb {

struct SweepOptions {
  double lambda_min = 1e-4;
  double lambda_max = 1e4;
  int points_per_decade = 16;
  ShootingControls controls;
  /// Worker threads; the grid is split into contiguous chunks.
  int jobs = 1;
  bool warm_start = true;
  /// More failed points than this fraction raises SweepDegenerate.
  double max_failure_fraction = 0.2;
  DiagnosticGates gates;
  bool keep_profiles = false;
  /// Called once per grid point in lambda order after the sweep.
  std::function<void(const BranchPoint&)> observer;
};

struct MassCurve {
  std::vector<BranchPoint> points;
  /// Central amplitudes, NaN for failed points.
  std::vector<double> amplitudes;
  /// Filled when SweepOptions::keep_profiles is set; failed points hold nullopt.
  std::vector<std::optional<RadialProfile>> profiles;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  int points_per_decade = 0;
  std::optional<double> e0;
  std::optional<double> einf;
  std::vector<std::string> warnings;

  std::size_t failures() const;
};

class SweepDegenerateError : public Error {
 public:
  SweepDegenerateError(const std::string& message, MassCurve partial)
      : Error(ErrorCode::SweepDegenerate, message), partial_(std::move(partial)) {}
  const MassCurve& partial() const { return partial_; }

 private:
  MassCurve partial_;
};

/// lambda_k = lambda_min 10^{k/ppd}; the last point is lambda_max exactly.
std::vector<double> log_grid(double lambda_min, double lambda_max, int points_per_decade);

/// Warm-start predictor xi (lambda / lambda_prev)^{1/(alpha-2)} below
/// lambda = 1 and with beta above.
double predict_amplitude(const NonlinearitySpec& spec, double xi_prev, double lambda_prev,
                         double lambda);

MassCurve sweep_branch(const NonlinearitySpec& spec, int dimension, const SweepOptions& options);

enum class Regime { Small, Large };

const char* to_string(Regime regime);

struct RescaledProfile {
  double lambda = 0.0;
  Regime regime = Regime::Small;
  std::vector<double> x;
  std::vector<double> v;
};

/// v(x) = lambda^{1/(2-alpha)} u(x / sqrt(lambda)) (small) or with beta
/// (large), sampled at the given nodes or, by default, at sqrt(lambda) r_i.
RescaledProfile rescale_profile(const RadialProfile& profile, Regime regime,
                                std::span<const double> nodes = {});

/// max_i |v(x_i) - U(x_i)| against a reference profile.
double sup_distance(const RescaledProfile& rescaled, const RadialProfile& reference);

struct ExponentFit {
  std::optional<double> e0;
  std::optional<double> einf;
  double theory_e0 = 0.0;
  double theory_einf = 0.0;
};

/// Least-squares slope of log(field) against log(lambda) over the outermost
/// decade at one end, skipping invalid or gated points. nullopt when the
/// curve spans less than two decades or fewer than two points qualify.
std::optional<double> fit_end_slope(const MassCurve& curve, bool small_end,
                                    double BranchPoint::*field, const DiagnosticGates& gates = {});

ExponentFit fit_asymptotic_exponents(const MassCurve& curve, const NonlinearitySpec& spec,
                                     int dimension, const DiagnosticGates& gates = {});

struct MassExtremum {
  double lambda = 0.0;
  double mass = 0.0;
  bool maximum = true;
  /// Vertex of the parabola through the three grid points around the extremum.
  double parabolic_lambda = 0.0;
};

/// Interior grid maximum (or else minimum) of the mass, refined by
/// golden-section search in log lambda with fresh shoots. nullopt when the
/// extremum sits on the grid boundary. The observer sees every refinement shoot.
std::optional<MassExtremum> locate_mass_extremum(
    const MassCurve& curve, const NonlinearitySpec& spec, int dimension,
    const ShootingControls& controls = {}, double log_tolerance = 1e-6,
    const std::function<void(const BranchPoint&)>& observer = {});

}  // namespace nlsb
