#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlsb/branch.hpp"

namespace nlsb {

enum class CaseLabel { I, II, III_1, III_2, IV_1, IV_2, V_1, V_2, VI };

/// "i", "ii", "iii-1", ...
const char* to_string(CaseLabel label);

/// Compares alpha and beta with 2 + 4/N; exact ties (to 1e-12) are their
/// own cases. Throws OutOfScope when alpha or beta reaches 2*.
CaseLabel classify_case(const NonlinearitySpec& spec, int dimension);

/// Cases reachable only through declared asymptotic overrides.
bool is_experimental(CaseLabel label);

enum class PredictionKind {
  ExistsAtLeast,
  NoSolutionForLargeA,
  NoSolutionForSmallA,
  MayNotExist,
};

const char* to_string(PredictionKind kind);

struct Prediction {
  PredictionKind kind = PredictionKind::MayNotExist;
  /// Minimum number of solutions the existence clause guarantees for a.
  int guaranteed_roots = 0;
  /// Computed threshold the clause was evaluated against, if any.
  std::optional<double> threshold_low;
  std::optional<double> threshold_high;
  std::string clause;
};

/// Thresholds for the clause: mu^{-N/2} ||U_{1+4/N}||^2 values in the
/// critical cases, the computed mass extremum in the mixed cases.
struct CaseThresholds {
  std::optional<double> critical_low;
  std::optional<double> critical_high;
  std::optional<MassExtremum> extremum;
};

CaseThresholds compute_thresholds(const NonlinearitySpec& spec, int dimension, CaseLabel label,
                                  const MassCurve* curve, const ShootingControls& controls = {},
                                  const std::function<void(const BranchPoint&)>& observer = {});

Prediction predict_for_mass(CaseLabel label, const CaseThresholds& thresholds, double a);

/// Convenience form that computes the thresholds itself (sweeping the
/// default grid in the mixed cases).
Prediction predict_for_mass(const NonlinearitySpec& spec, int dimension, double a,
                            const SweepOptions& options = {});

struct NormalizedOptions {
  SweepOptions sweep;
  /// Root refinement stops once |rho - a| <= root_tolerance * a.
  double root_tolerance = 1e-7;
  /// Decades the grid may be extended at either end.
  int max_extension_decades = 2;
};

struct NormalizedRoot {
  double lambda = 0.0;
  BranchPoint point;
  RadialProfile profile;
};

struct CaseReport {
  CaseLabel label = CaseLabel::I;
  bool experimental = false;
  int dimension = 1;
  double mass_critical = 0.0;
  AsymptoticData exponents{};
  double target = 0.0;
  CaseThresholds thresholds;
  Prediction prediction;
  std::vector<NormalizedRoot> roots;
  MassCurve curve;
  /// Smallest and largest valid mass on the swept grid.
  double observed_min_mass = 0.0;
  double observed_max_mass = 0.0;
  bool prediction_met = false;
  std::vector<std::string> warnings;
};

/// Sweeps the branch, extends the grid where the end slopes promise a
/// crossing, and refines every sign change of rho - a with fresh shoots.
/// Throws Error(Domain) for a <= 0; SweepDegenerate propagates.
CaseReport solve_normalized(const NonlinearitySpec& spec, int dimension, double a,
                            const NormalizedOptions& options = {});

}  // namespace nlsb
