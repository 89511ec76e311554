#include "nlsb/branch.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "format.hpp"
#include "nlsb/root_finding.hpp"

namespace nlsb {

std::size_t MassCurve::failures() const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [](const BranchPoint& b) { return !b.valid; }));
}

std::vector<double> log_grid(double lambda_min, double lambda_max, int points_per_decade) {
  if (!(lambda_min > 0.0) || !std::isfinite(lambda_max)) {
    throw Error(ErrorCode::Domain, "no positive solutions exist for lambda <= 0");
  }
  if (!(lambda_max >= lambda_min)) throw Error(ErrorCode::Domain, "lambda_max < lambda_min");
  if (points_per_decade < 1) throw Error(ErrorCode::Domain, "points per decade must be >= 1");
  std::vector<double> grid{lambda_min};
  if (lambda_max == lambda_min) return grid;
  const double decades = std::log10(lambda_max / lambda_min);
  const auto steps = static_cast<int>(std::floor(decades * points_per_decade + 1e-9));
  for (int k = 1; k <= steps; ++k) {
    grid.push_back(lambda_min * std::pow(10.0, static_cast<double>(k) / points_per_decade));
  }
  if (grid.back() < lambda_max * (1.0 - 1e-9)) {
    grid.push_back(lambda_max);
  } else {
    grid.back() = lambda_max;
  }
  return grid;
}

double predict_amplitude(const NonlinearitySpec& spec, double xi_prev, double lambda_prev,
                         double lambda) {
  const auto ex = asymptotic_exponents(spec);
  const double e = lambda < 1.0 ? ex.alpha : ex.beta;
  return xi_prev * std::pow(lambda / lambda_prev, 1.0 / (e - 2.0));
}

MassCurve sweep_branch(const NonlinearitySpec& spec, int dimension, const SweepOptions& options) {
  if (dimension < 1) throw Error(ErrorCode::Domain, "dimension must be at least 1");
  options.controls.validate();
  const auto grid = log_grid(options.lambda_min, options.lambda_max, options.points_per_decade);
  const std::size_t n = grid.size();

  MassCurve curve;
  curve.lambda_min = options.lambda_min;
  curve.lambda_max = options.lambda_max;
  curve.points_per_decade = options.points_per_decade;
  curve.points.resize(n);
  curve.amplitudes.assign(n, std::numeric_limits<double>::quiet_NaN());
  if (options.keep_profiles) curve.profiles.resize(n);

  auto work = [&](std::size_t begin, std::size_t end) {
    std::optional<double> prev_xi;
    double prev_lambda = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      std::optional<double> hint;
      if (options.warm_start && prev_xi) {
        hint = predict_amplitude(spec, *prev_xi, prev_lambda, grid[i]);
      }
      try {
        auto profile = shoot_ground(spec, dimension, grid[i], options.controls, hint);
        curve.points[i] = evaluate_branch_point(profile);
        curve.amplitudes[i] = profile.xi;
        prev_xi = profile.xi;
        prev_lambda = grid[i];
        if (options.keep_profiles) curve.profiles[i] = std::move(profile);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Domain) throw;
        BranchPoint failed;
        failed.lambda = grid[i];
        failed.valid = false;
        failed.message = e.what();
        const double nan = std::numeric_limits<double>::quiet_NaN();
        failed.mass = failed.kinetic = failed.sup = failed.potential = failed.action = nan;
        failed.pohozaev_residual = failed.nehari_residual = failed.mp_gap = nan;
        curve.points[i] = failed;
        prev_xi.reset();
      }
    }
  };

  const auto jobs = static_cast<std::size_t>(std::clamp<int>(options.jobs, 1, static_cast<int>(n)));
  if (jobs == 1) {
    work(0, n);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(jobs);
    for (std::size_t j = 0; j < jobs; ++j) {
      const std::size_t begin = n * j / jobs;
      const std::size_t end = n * (j + 1) / jobs;
      threads.emplace_back([&, j, begin, end] {
        try {
          work(begin, end);
        } catch (...) {
          errors[j] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  for (const auto& b : curve.points) {
    if (b.valid && !within_gates(b, options.gates)) {
      curve.warnings.push_back("lambda = " + format_double(b.lambda) +
                               " outside the diagnostic gates");
    }
    if (!b.valid) {
      curve.warnings.push_back("lambda = " + format_double(b.lambda) + " failed: " + b.message);
    }
  }
  const auto fit = fit_asymptotic_exponents(curve, spec, dimension, options.gates);
  curve.e0 = fit.e0;
  curve.einf = fit.einf;
  if (options.observer) {
    for (const auto& b : curve.points) options.observer(b);
  }
  const std::size_t failed = curve.failures();
  if (static_cast<double>(failed) > options.max_failure_fraction * static_cast<double>(n)) {
    const std::string message = std::to_string(failed) + " of " + std::to_string(n) +
                                " grid points failed";
    throw SweepDegenerateError(message, std::move(curve));
  }
  return curve;
}

const char* to_string(Regime regime) { return regime == Regime::Small ? "small" : "large"; }

RescaledProfile rescale_profile(const RadialProfile& profile, Regime regime,
                                std::span<const double> nodes) {
  const auto ex = asymptotic_exponents(profile.spec);
  const double e = regime == Regime::Small ? ex.alpha : ex.beta;
  const double lambda = profile.lambda;
  const double factor = std::pow(lambda, 1.0 / (2.0 - e));
  const double sl = std::sqrt(lambda);
  RescaledProfile out;
  out.lambda = lambda;
  out.regime = regime;
  if (nodes.empty()) {
    out.x.reserve(profile.r.size());
    out.v.reserve(profile.r.size());
    for (std::size_t i = 0; i < profile.r.size(); ++i) {
      out.x.push_back(sl * profile.r[i]);
      out.v.push_back(factor * profile.u[i]);
    }
  } else {
    out.x.assign(nodes.begin(), nodes.end());
    out.v.reserve(nodes.size());
    for (double x : nodes) out.v.push_back(factor * profile.value_at(x / sl));
  }
  return out;
}

double sup_distance(const RescaledProfile& rescaled, const RadialProfile& reference) {
  double worst = 0.0;
  for (std::size_t i = 0; i < rescaled.x.size(); ++i) {
    worst = std::max(worst, std::abs(rescaled.v[i] - reference.value_at(rescaled.x[i])));
  }
  return worst;
}

std::optional<double> fit_end_slope(const MassCurve& curve, bool small_end,
                                    double BranchPoint::*field, const DiagnosticGates& gates) {
  if (curve.points.size() < 2) return std::nullopt;
  const double lo = curve.points.front().lambda;
  const double hi = curve.points.back().lambda;
  if (std::log10(hi / lo) < 2.0 - 1e-9) return std::nullopt;
  const double edge = small_end ? lo * std::pow(10.0, 1.0 + 1e-9) : hi * std::pow(10.0, -1.0 - 1e-9);
  std::vector<double> xs, ys;
  for (const auto& b : curve.points) {
    const bool inside = small_end ? b.lambda <= edge : b.lambda >= edge;
    if (!inside || !within_gates(b, gates) || !(b.*field > 0.0)) continue;
    xs.push_back(std::log(b.lambda));
    ys.push_back(std::log(b.*field));
  }
  if (xs.size() < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

ExponentFit fit_asymptotic_exponents(const MassCurve& curve, const NonlinearitySpec& spec,
                                     int dimension, const DiagnosticGates& gates) {
  const auto ex = asymptotic_exponents(spec);
  ExponentFit fit;
  fit.theory_e0 = 2.0 / (ex.alpha - 2.0) - 0.5 * dimension;
  fit.theory_einf = 2.0 / (ex.beta - 2.0) - 0.5 * dimension;
  fit.e0 = fit_end_slope(curve, true, &BranchPoint::mass, gates);
  fit.einf = fit_end_slope(curve, false, &BranchPoint::mass, gates);
  return fit;
}

std::optional<MassExtremum> locate_mass_extremum(
    const MassCurve& curve, const NonlinearitySpec& spec, int dimension,
    const ShootingControls& controls, double log_tolerance,
    const std::function<void(const BranchPoint&)>& observer) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    if (curve.points[i].valid) idx.push_back(i);
  }
  if (idx.size() < 3) return std::nullopt;
  auto mass = [&](std::size_t k) { return curve.points[idx[k]].mass; };

  std::size_t best = 0;
  bool maximum = true;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    if (mass(k) > mass(best)) best = k;
  }
  if (best == 0 || best + 1 == idx.size()) {
    maximum = false;
    best = 0;
    for (std::size_t k = 1; k < idx.size(); ++k) {
      if (mass(k) < mass(best)) best = k;
    }
    if (best == 0 || best + 1 == idx.size()) return std::nullopt;
  }
  const double sign = maximum ? 1.0 : -1.0;
  const auto& left = curve.points[idx[best - 1]];
  const auto& mid = curve.points[idx[best]];
  const auto& right = curve.points[idx[best + 1]];
  const double xl = std::log(left.lambda), xm = std::log(mid.lambda), xr = std::log(right.lambda);

  MassExtremum out;
  out.maximum = maximum;
  out.parabolic_lambda =
      std::exp(parabolic_vertex(xl, left.mass, xm, mid.mass, xr, right.mass).value_or(xm));

  const double xi_mid = curve.amplitudes.size() == curve.points.size()
                            ? curve.amplitudes[idx[best]]
                            : std::numeric_limits<double>::quiet_NaN();
  auto objective = [&](double x) {
    const double lambda = std::exp(x);
    std::optional<double> hint;
    if (std::isfinite(xi_mid)) hint = predict_amplitude(spec, xi_mid, mid.lambda, lambda);
    const auto profile = shoot_ground(spec, dimension, lambda, controls, hint);
    if (observer) {
      const auto point = evaluate_branch_point(profile);
      observer(point);
      return sign * point.mass;
    }
    return sign * compute_mass(profile);
  };
  const auto [x, f] = golden_section_max(objective, xl, xr, log_tolerance);
  out.lambda = std::exp(x);
  out.mass = sign * f;
  return out;
}

}  // namespace nlsb
