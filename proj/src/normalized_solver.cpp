#include "nlsb/normalized_solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "format.hpp"
#include "nlsb/ground_states.hpp"
#include "nlsb/root_finding.hpp"

namespace nlsb {

const char* to_string(CaseLabel label) {
  switch (label) {
    case CaseLabel::I: return "i";
    case CaseLabel::II: return "ii";
    case CaseLabel::III_1: return "iii-1";
    case CaseLabel::III_2: return "iii-2";
    case CaseLabel::IV_1: return "iv-1";
    case CaseLabel::IV_2: return "iv-2";
    case CaseLabel::V_1: return "v-1";
    case CaseLabel::V_2: return "v-2";
    case CaseLabel::VI: return "vi";
  }
  return "unknown";
}

const char* to_string(PredictionKind kind) {
  switch (kind) {
    case PredictionKind::ExistsAtLeast: return "exists-at-least";
    case PredictionKind::NoSolutionForLargeA: return "no-solution-for-large-a";
    case PredictionKind::NoSolutionForSmallA: return "no-solution-for-small-a";
    case PredictionKind::MayNotExist: return "may-not-exist";
  }
  return "unknown";
}

bool is_experimental(CaseLabel label) {
  return label == CaseLabel::III_2 || label == CaseLabel::IV_2 || label == CaseLabel::V_2;
}

CaseLabel classify_case(const NonlinearitySpec& spec, int dimension) {
  if (dimension < 1) throw Error(ErrorCode::Domain, "dimension must be at least 1");
  const auto ex = asymptotic_exponents(spec);
  const double star = sobolev_exponent(dimension);
  if (ex.alpha >= star || ex.beta >= star) {
    throw Error(ErrorCode::OutOfScope,
                "exponents alpha = " + format_shortest(ex.alpha) + ", beta = " +
                    format_shortest(ex.beta) + " must stay below 2* = " + format_shortest(star) +
                    " for N = " + std::to_string(dimension));
  }
  const double c = 2.0 + 4.0 / dimension;
  auto cmp = [c](double x) { return std::abs(x - c) <= 1e-12 * c ? 0 : (x < c ? -1 : 1); };
  const int a = cmp(ex.alpha), b = cmp(ex.beta);
  if (a < 0 && b < 0) return CaseLabel::I;
  if (a == 0 && b == 0) return CaseLabel::II;
  if (a < 0 && b == 0) return CaseLabel::III_1;
  if (a == 0 && b < 0) return CaseLabel::III_2;
  if (a < 0 && b > 0) return CaseLabel::IV_1;
  if (a > 0 && b < 0) return CaseLabel::IV_2;
  if (a == 0 && b > 0) return CaseLabel::V_1;
  if (a > 0 && b == 0) return CaseLabel::V_2;
  return CaseLabel::VI;
}

CaseThresholds compute_thresholds(const NonlinearitySpec& spec, int dimension, CaseLabel label,
                                  const MassCurve* curve, const ShootingControls& controls,
                                  const std::function<void(const BranchPoint&)>& observer) {
  const auto ex = asymptotic_exponents(spec);
  CaseThresholds t;
  auto critical = [&](double mu) { return critical_mass_threshold(dimension, mu, controls); };
  switch (label) {
    case CaseLabel::II:
      t.critical_low = critical(std::max(ex.mu1, ex.mu2));
      t.critical_high = critical(std::min(ex.mu1, ex.mu2));
      break;
    case CaseLabel::III_1:
      t.critical_high = critical(ex.mu2);
      break;
    case CaseLabel::III_2:
      t.critical_low = critical(ex.mu1);
      break;
    case CaseLabel::V_1:
      t.critical_high = critical(ex.mu1);
      break;
    case CaseLabel::V_2:
      t.critical_low = critical(ex.mu2);
      break;
    case CaseLabel::IV_1:
    case CaseLabel::IV_2:
      if (curve) {
        t.extremum = locate_mass_extremum(*curve, spec, dimension, controls, 1e-6, observer);
      }
      break;
    default:
      break;
  }
  return t;
}

Prediction predict_for_mass(CaseLabel label, const CaseThresholds& t, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorCode::Domain, "target mass a must be positive");
  Prediction p;
  p.threshold_low = t.critical_low;
  p.threshold_high = t.critical_high;
  auto exists = [&](int k, std::string clause) {
    p.kind = PredictionKind::ExistsAtLeast;
    p.guaranteed_roots = k;
    p.clause = std::move(clause);
  };
  auto none = [&](PredictionKind kind, std::string clause) {
    p.kind = kind;
    p.guaranteed_roots = 0;
    p.clause = std::move(clause);
  };
  switch (label) {
    case CaseLabel::I:
    case CaseLabel::VI:
      exists(1, "a solution exists for every a > 0");
      break;
    case CaseLabel::II:
      if (*t.critical_low < a && a < *t.critical_high) {
        exists(1, "a lies strictly inside the critical mass interval");
      } else if (a <= *t.critical_low) {
        none(PredictionKind::NoSolutionForSmallA,
             "a at or below the critical interval; no solution below some a1 <= its lower end");
      } else {
        none(PredictionKind::NoSolutionForLargeA,
             "a at or above the critical interval; no solution above some a2 >= its upper end");
      }
      break;
    case CaseLabel::III_1:
    case CaseLabel::V_1:
      if (a < *t.critical_high) {
        exists(1, "a below the critical threshold");
      } else {
        none(PredictionKind::NoSolutionForLargeA,
             "a at or above the critical threshold; no solution above some a* >= it");
      }
      break;
    case CaseLabel::III_2:
    case CaseLabel::V_2:
      if (a > *t.critical_low) {
        exists(1, "a above the critical threshold");
      } else {
        none(PredictionKind::NoSolutionForSmallA,
             "a at or below the critical threshold; no solution below some a* <= it");
      }
      break;
    case CaseLabel::IV_1:
      if (!t.extremum || !t.extremum->maximum) {
        none(PredictionKind::MayNotExist, "no interior mass maximum found on the grid");
      } else {
        p.threshold_high = t.extremum->mass;
        if (a < t.extremum->mass) {
          exists(2, "a below the computed mass maximum a*");
        } else {
          none(PredictionKind::NoSolutionForLargeA,
               "a at or above the computed mass maximum; no solution above some M");
        }
      }
      break;
    case CaseLabel::IV_2:
      if (!t.extremum || t.extremum->maximum) {
        none(PredictionKind::MayNotExist, "no interior mass minimum found on the grid");
      } else {
        p.threshold_low = t.extremum->mass;
        if (a > t.extremum->mass) {
          exists(2, "a above the computed mass minimum a*");
        } else {
          none(PredictionKind::NoSolutionForSmallA,
               "a at or below the computed mass minimum; no solution below some m");
        }
      }
      break;
  }
  return p;
}

Prediction predict_for_mass(const NonlinearitySpec& spec, int dimension, double a,
                            const SweepOptions& options) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorCode::Domain, "target mass a must be positive");
  const CaseLabel label = classify_case(spec, dimension);
  std::optional<MassCurve> curve;
  if (label == CaseLabel::IV_1 || label == CaseLabel::IV_2) {
    curve = sweep_branch(spec, dimension, options);
  }
  const auto t =
      compute_thresholds(spec, dimension, label, curve ? &*curve : nullptr, options.controls);
  return predict_for_mass(label, t, a);
}

namespace {

void append_curve(MassCurve& into, MassCurve&& other, bool at_front) {
  // the shared boundary point is kept from `into`
  auto take = [&](auto& dst, auto& src) {
    if (src.empty()) return;
    if (at_front) {
      src.pop_back();
      dst.insert(dst.begin(), std::make_move_iterator(src.begin()),
                 std::make_move_iterator(src.end()));
    } else {
      dst.insert(dst.end(), std::make_move_iterator(src.begin() + 1),
                 std::make_move_iterator(src.end()));
    }
  };
  take(into.points, other.points);
  take(into.amplitudes, other.amplitudes);
  take(into.profiles, other.profiles);
  for (auto& w : other.warnings) into.warnings.push_back(std::move(w));
  if (at_front) {
    into.lambda_min = other.lambda_min;
  } else {
    into.lambda_max = other.lambda_max;
  }
}

const BranchPoint* end_point(const MassCurve& curve, bool front) {
  if (front) {
    for (const auto& b : curve.points) {
      if (b.valid) return &b;
    }
  } else {
    for (auto it = curve.points.rbegin(); it != curve.points.rend(); ++it) {
      if (it->valid) return &*it;
    }
  }
  return nullptr;
}

}  // namespace

CaseReport solve_normalized(const NonlinearitySpec& spec, int dimension, double a,
                            const NormalizedOptions& options) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorCode::Domain, "target mass a must be positive");
  if (!(options.sweep.lambda_min > 0.0)) {
    throw Error(ErrorCode::Domain, "no positive solutions exist for lambda <= 0");
  }
  CaseReport report;
  report.label = classify_case(spec, dimension);
  report.experimental = is_experimental(report.label);
  report.dimension = dimension;
  report.mass_critical = 2.0 + 4.0 / dimension;
  report.exponents = asymptotic_exponents(spec);
  report.target = a;
  if (report.experimental) {
    report.warnings.push_back(std::string("case ") + to_string(report.label) +
                              " is only reachable with declared overrides; experimental");
  }

  const auto& sw = options.sweep;
  MassCurve curve = sweep_branch(spec, dimension, sw);
  const ExponentFit theory = fit_asymptotic_exponents(curve, spec, dimension, sw.gates);

  // Extend the grid where the end slope says rho - a must still change sign.
  for (int d = 0; d < options.max_extension_decades; ++d) {
    const BranchPoint* first = end_point(curve, true);
    if (!first) break;
    const double e = theory.theory_e0;
    if (!((e > 0.0 && first->mass > a) || (e < 0.0 && first->mass < a))) break;
    SweepOptions ext = sw;
    ext.lambda_max = curve.lambda_min;
    ext.lambda_min = curve.lambda_min / 10.0;
    append_curve(curve, sweep_branch(spec, dimension, ext), true);
    report.warnings.push_back("grid extended down to lambda = " + format_double(curve.lambda_min));
  }
  for (int d = 0; d < options.max_extension_decades; ++d) {
    const BranchPoint* last = end_point(curve, false);
    if (!last) break;
    const double e = theory.theory_einf;
    if (!((e > 0.0 && last->mass < a) || (e < 0.0 && last->mass > a))) break;
    SweepOptions ext = sw;
    ext.lambda_min = curve.lambda_max;
    ext.lambda_max = curve.lambda_max * 10.0;
    append_curve(curve, sweep_branch(spec, dimension, ext), false);
    report.warnings.push_back("grid extended up to lambda = " + format_double(curve.lambda_max));
  }
  const auto refit = fit_asymptotic_exponents(curve, spec, dimension, sw.gates);
  curve.e0 = refit.e0;
  curve.einf = refit.einf;

  std::vector<std::size_t> valid;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    if (curve.points[i].valid) valid.push_back(i);
  }
  if (!valid.empty()) {
    report.observed_min_mass = report.observed_max_mass = curve.points[valid.front()].mass;
    for (std::size_t i : valid) {
      report.observed_min_mass = std::min(report.observed_min_mass, curve.points[i].mass);
      report.observed_max_mass = std::max(report.observed_max_mass, curve.points[i].mass);
    }
  }

  // brackets [i, j] between consecutive valid points; a grid point hitting
  // a exactly is its own bracket
  std::vector<std::pair<std::size_t, std::size_t>> brackets;
  for (std::size_t k = 0; k < valid.size(); ++k) {
    const double fk = curve.points[valid[k]].mass - a;
    if (fk == 0.0) {
      brackets.emplace_back(valid[k], valid[k]);
      continue;
    }
    if (k + 1 < valid.size()) {
      const double fn = curve.points[valid[k + 1]].mass - a;
      if (fn != 0.0 && (fk > 0.0) != (fn > 0.0)) brackets.emplace_back(valid[k], valid[k + 1]);
    }
  }

  const double ftol = options.root_tolerance * a;
  // branch points of every refinement shoot, per bracket
  std::vector<std::vector<BranchPoint>> seen(brackets.size());
  auto refine = [&](std::size_t i, std::size_t j, std::vector<BranchPoint>& log) {
    const double xi_ref = curve.amplitudes[i];
    const double lambda_ref = curve.points[i].lambda;
    auto shoot = [&](double x) {
      const double lambda = std::exp(x);
      return shoot_ground(spec, dimension, lambda, sw.controls,
                          predict_amplitude(spec, xi_ref, lambda_ref, lambda));
    };
    auto f = [&](double x) {
      const auto point = evaluate_branch_point(shoot(x));
      log.push_back(point);
      return point.mass - a;
    };
    double x = std::log(curve.points[i].lambda);
    if (i != j) {
      const double xl = x, xr = std::log(curve.points[j].lambda);
      x = brent_root(f, xl, xr, curve.points[i].mass - a, curve.points[j].mass - a, 1e-14, ftol).x;
    }
    auto profile = shoot(x);
    auto point = evaluate_branch_point(profile);
    return NormalizedRoot{point.lambda, point, std::move(profile)};
  };

  std::vector<std::optional<NormalizedRoot>> found(brackets.size());
  const auto jobs = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, sw.jobs)),
                                          std::max<std::size_t>(1, brackets.size()));
  if (jobs <= 1) {
    for (std::size_t k = 0; k < brackets.size(); ++k) {
      found[k] = refine(brackets[k].first, brackets[k].second, seen[k]);
    }
  } else {
    std::vector<std::exception_ptr> errors(brackets.size());
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < jobs; ++w) {
      threads.emplace_back([&, w] {
        for (std::size_t k = w; k < brackets.size(); k += jobs) {
          try {
            found[k] = refine(brackets[k].first, brackets[k].second, seen[k]);
          } catch (...) {
            errors[k] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  if (sw.observer) {
    for (const auto& log : seen) {
      for (const auto& b : log) sw.observer(b);
    }
  }
  for (auto& r : found) {
    if (std::abs(r->point.mass - a) > 1e-6 * a) {
      report.warnings.push_back("root at lambda = " + format_double(r->lambda) +
                                " misses the target mass by " +
                                format_double(std::abs(r->point.mass - a) / a) + " relative");
    }
    if (sw.observer) sw.observer(r->point);
    report.roots.push_back(std::move(*r));
  }

  report.thresholds =
      compute_thresholds(spec, dimension, report.label, &curve, sw.controls, sw.observer);
  report.prediction = predict_for_mass(report.label, report.thresholds, a);
  report.prediction_met =
      static_cast<int>(report.roots.size()) >= report.prediction.guaranteed_roots;
  if (!report.prediction_met) {
    report.warnings.push_back("PREDICTION-UNMET: found " + std::to_string(report.roots.size()) +
                              " roots, expected at least " +
                              std::to_string(report.prediction.guaranteed_roots) +
                              "; try more points per decade");
  }
  for (auto& w : curve.warnings) report.warnings.push_back(w);
  report.curve = std::move(curve);
  return report;
}

}  // namespace nlsb
