#include "nlsb/radial_shooting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <utility>

#include "format.hpp"
#include "nlsb/dop853.hpp"

namespace nlsb {

void ShootingControls::validate() const {
  const double values[] = {step_tolerance, max_scaled_radius, amplitude_tolerance, decay_threshold,
                           cone_width,     divergence_threshold, node_spacing,     launch_scale};
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::Domain, "shooting controls must be finite and positive");
    }
  }
  if (node_spacing * 8.0 > max_scaled_radius) {
    throw Error(ErrorCode::Domain, "node spacing too coarse for the maximal radius");
  }
}

std::string ShootingControls::fingerprint() const {
  std::ostringstream out;
  out << format_double(step_tolerance) << ';' << format_double(max_scaled_radius) << ';'
      << format_double(amplitude_tolerance) << ';' << format_double(decay_threshold) << ';'
      << format_double(cone_width) << ';' << format_double(divergence_threshold) << ';'
      << format_double(node_spacing) << ';' << format_double(launch_scale);
  return out.str();
}

const char* to_string(ShootingStatus status) {
  switch (status) {
    case ShootingStatus::Decay:
      return "decay";
    case ShootingStatus::Crossing:
      return "crossing";
    case ShootingStatus::Divergence:
      return "divergence";
    case ShootingStatus::Indeterminate:
      return "indeterminate";
  }
  return "unknown";
}

double ExponentialTail::value(double radius_) const {
  return std::exp(std::log(amplitude) - rate * radius_ - power * std::log(radius_));
}

double ExponentialTail::derivative(double radius_) const {
  return -value(radius_) * (rate + power / radius_);
}

namespace {

double hermite(double r0, double r1, double u0, double u1, double d0, double d1, double x,
               bool derivative) {
  const double h = r1 - r0;
  const double s = (x - r0) / h;
  if (!derivative) {
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * u0 + h10 * h * d0 + h01 * u1 + h11 * h * d1;
  }
  const double g00 = 6 * s * s - 6 * s;
  const double g10 = 3 * s * s - 4 * s + 1;
  const double g01 = -g00;
  const double g11 = 3 * s * s - 2 * s;
  return (g00 * u0 + g01 * u1) / h + g10 * d0 + g11 * d1;
}

double profile_eval(const RadialProfile& p, double x, bool derivative) {
  if (p.r.empty()) throw Error(ErrorCode::InvalidProfile, "empty profile");
  if (x <= 0.0) return derivative ? 0.0 : p.u.front();
  if (x >= p.r.back()) {
    if (x == p.r.back()) return derivative ? p.du.back() : p.u.back();
    if (!p.tail) throw Error(ErrorCode::MissingTail, "profile has no tail beyond its last node");
    return derivative ? p.tail->derivative(x) : p.tail->value(x);
  }
  const auto it = std::upper_bound(p.r.begin(), p.r.end(), x);
  const auto i = static_cast<std::size_t>(it - p.r.begin()) - 1;
  return hermite(p.r[i], p.r[i + 1], p.u[i], p.u[i + 1], p.du[i], p.du[i + 1], x, derivative);
}

// sum_i c_i s^p_i for s > 0, zero otherwise; no finiteness checks so that
// trial steps may overflow and get rejected by the error estimate.
struct PowerSum {
  std::vector<std::pair<double, double>> terms;

  double operator()(double s) const {
    if (!(s > 0.0)) return 0.0;
    double sum = 0.0;
    for (const auto& [c, p] : terms) sum += c * std::pow(s, p);
    return sum;
  }
};

// g(xi w) / (lambda xi) as a power sum in w.
PowerSum scaled_source(const NonlinearitySpec& spec, double lambda, double xi) {
  PowerSum out;
  for (const auto& term : spec.terms()) {
    out.terms.emplace_back(
        std::exp(std::log(term.coefficient) + (term.exponent - 1.0) * std::log(xi) -
                 std::log(lambda)),
        term.exponent);
  }
  return out;
}

PowerSum plain_source(const NonlinearitySpec& spec) {
  PowerSum out;
  for (const auto& term : spec.terms()) out.terms.emplace_back(term.coefficient, term.exponent);
  return out;
}

// w'' = -(N-1)/t w' + w - g(xi w)/(lambda xi)
struct ScaledRhs {
  double nm1;
  PowerSum source;

  void operator()(double t, const std::array<double, 2>& y, std::array<double, 2>& dy) const {
    dy[0] = y[1];
    dy[1] = -nm1 * y[1] / t + y[0] - source(y[0]);
  }
};

// u'' = -(N-1)/r u' + lambda u - g(u)
struct PlainRhs {
  double nm1;
  double lambda;
  PowerSum source;

  void operator()(double r, const std::array<double, 2>& y, std::array<double, 2>& dy) const {
    dy[0] = y[1];
    dy[1] = -nm1 * y[1] / r + lambda * y[0] - source(y[0]);
  }
};

void require_frequency(double lambda) {
  if (!std::isfinite(lambda)) throw Error(ErrorCode::Domain, "lambda must be finite");
  if (!(lambda > 0.0)) {
    throw Error(ErrorCode::Domain, "no positive solutions exist for lambda <= 0");
  }
}

void require_dimension(int dimension) {
  if (dimension < 1) throw Error(ErrorCode::Domain, "dimension must be at least 1");
}

void require_amplitude(double xi) {
  if (!(xi > 0.0) || !std::isfinite(xi)) {
    throw Error(ErrorCode::Domain, "central amplitude must be finite and positive");
  }
}

struct Run {
  ShootingOutcome outcome;
  // index of the last recorded node that sat inside the decay cone
  std::optional<std::size_t> last_cone_node;
};

Run run_scaled(const NonlinearitySpec& spec, int dimension, double lambda, double xi,
               const ShootingControls& controls, bool detect_decay, bool record) {
  const double sl = std::sqrt(lambda);
  const double nm1 = dimension - 1.0;
  const double h = launch_radius(spec, lambda, xi, controls);
  const TrajectorySample launch = series_start(spec, dimension, lambda, xi, h);

  const double t0 = sl * h;
  const std::array<double, 2> y0 = {launch.u / xi, launch.du / (xi * sl)};
  Dop853Options opt;
  opt.rtol = controls.step_tolerance;
  opt.initial_step = t0;
  opt.max_step = 0.5;
  Dop853 ode(ScaledRhs{nm1, scaled_source(spec, lambda, xi)}, t0, y0, opt);

  const double t_max = controls.max_scaled_radius;
  // node spacing follows the core width, which shrinks once g'(xi) >> lambda
  const double dt = controls.node_spacing * std::sqrt(lambda / (lambda + eval_g_prime(spec, xi)));
  const double eps = controls.decay_threshold;
  const double w_div = controls.divergence_threshold;

  Run run;
  auto& out = run.outcome;
  auto push = [&](double t, double w, double dw) {
    if (record) out.samples.push_back({t / sl, xi * w, xi * sl * dw});
  };
  auto in_cone = [&](double t, double w, double dw) {
    return t >= 1.0 && w > 0.0 && dw < 0.0 &&
           std::abs(dw / w + 1.0 + 0.5 * nm1 / t) <= controls.cone_width;
  };
  auto finish = [&](ShootingStatus status, double t) {
    out.status = status;
    out.event_radius = t / sl;
    return run;
  };

  push(0.0, 1.0, 0.0);
  if (y0[1] > 0.0) return finish(ShootingStatus::Divergence, t0);

  std::size_t next = 1;
  while (ode.t() < t_max) {
    if (ode.step(t_max) == decltype(ode)::StepResult::Underflow) {
      const auto& y = ode.y();
      std::ostringstream msg;
      msg << "step size underflow at r = " << format_double(ode.t() / sl)
          << " (u = " << format_double(xi * y[0]) << ", u' = " << format_double(xi * sl * y[1])
          << ")";
      throw StiffnessError(msg.str(), {ode.t() / sl, xi * y[0], xi * sl * y[1]});
    }
    const double t_new = ode.t();
    const auto y = ode.y();

    double t_end = t_new;
    bool crossed = false;
    if (y[0] <= 0.0) {
      double a = ode.t_previous(), b = t_new;
      for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
        const double m = 0.5 * (a + b);
        if (ode.dense(m)[0] > 0.0) a = m; else b = m;
      }
      t_end = 0.5 * (a + b);
      crossed = true;
    }

    // bracket probes need no nodes, and at large xi there can be ~1e16 of them
    const bool visit_nodes = record || detect_decay;
    for (; visit_nodes && static_cast<double>(next) * dt <= t_end; ++next) {
      const double tg = static_cast<double>(next) * dt;
      const auto s = ode.dense(tg);
      if (crossed && !(s[0] > 0.0)) break;
      push(tg, s[0], s[1]);
      if (in_cone(tg, s[0], s[1])) {
        if (record) run.last_cone_node = out.samples.size() - 1;
        if (detect_decay && s[0] < eps) {
          ++next;
          return finish(ShootingStatus::Decay, tg);
        }
      }
    }
    if (crossed) return finish(ShootingStatus::Crossing, t_end);
    if ((y[1] > 0.0 && y[0] > 0.0) || y[0] > w_div) {
      return finish(ShootingStatus::Divergence, t_new);
    }
  }
  return finish(ShootingStatus::Indeterminate, t_max);
}

void compute_residual(RadialProfile& p) {
  const auto& spec = p.spec;
  const std::size_t n = p.r.size();
  const double scale = p.lambda * p.u.front();
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double dr = p.r[i + 1] - p.r[i];
    const double upp =
        (-p.du[i + 2] + 8.0 * p.du[i + 1] - 8.0 * p.du[i - 1] + p.du[i - 2]) / (12.0 * dr);
    const double res = -upp - (p.dimension - 1.0) * p.du[i] / p.r[i] + p.lambda * p.u[i] -
                       eval_g(spec, p.u[i]);
    worst = std::max(worst, std::abs(res) / scale);
  }
  p.residual_max = worst;
  if (worst > 1e-6) {
    p.warnings.push_back("ODE residual " + format_double(worst) + " exceeds 1e-6 lambda u(0)");
  }
}

RadialProfile build_profile(const NonlinearitySpec& spec, int dimension, double lambda, double xi,
                            Run run, int shoots) {
  RadialProfile p{spec, dimension, lambda, xi, {}, {}, {}, std::nullopt, 0.0, 0, {}};
  p.dimension = dimension;
  p.lambda = lambda;
  p.xi = xi;
  p.shoots = shoots;
  auto samples = std::move(run.outcome.samples);
  if (run.outcome.status != ShootingStatus::Decay) {
    if (!run.last_cone_node || *run.last_cone_node < 8) {
      throw Error(ErrorCode::ShootFailed,
                  std::string("no decaying trajectory found (final status ") +
                      to_string(run.outcome.status) + ")");
    }
    samples.resize(*run.last_cone_node + 1);
    p.warnings.push_back(std::string("decay threshold not reached (") +
                         to_string(run.outcome.status) +
                         "); profile cut at the last node inside the decay cone");
  }
  p.r.reserve(samples.size());
  p.u.reserve(samples.size());
  p.du.reserve(samples.size());
  for (const auto& s : samples) {
    p.r.push_back(s.r);
    p.u.push_back(s.u);
    p.du.push_back(s.du);
  }
  for (std::size_t i = 1; i < p.r.size(); ++i) {
    if (!(p.du[i] < 0.0) || !(p.u[i] > 0.0)) {
      throw Error(ErrorCode::InvalidProfile,
                  "profile is not positive and strictly decreasing at r = " +
                      format_double(p.r[i]));
    }
  }
  compute_residual(p);
  attach_exponential_tail(p);
  return p;
}

}  // namespace

double RadialProfile::value_at(double radius) const { return profile_eval(*this, radius, false); }

double RadialProfile::derivative_at(double radius) const {
  return profile_eval(*this, radius, true);
}

double launch_radius(const NonlinearitySpec& spec, double lambda, double xi,
                     const ShootingControls& controls) {
  return controls.launch_scale / std::sqrt(lambda + eval_g_prime(spec, xi));
}

TrajectorySample series_start(const NonlinearitySpec& spec, int dimension, double lambda,
                              double xi, double h) {
  require_dimension(dimension);
  require_amplitude(xi);
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::Domain, "series start needs lambda >= 0");
  }
  const double gp = eval_g_prime(spec, xi);
  if (!(h > 0.0)) throw Error(ErrorCode::Domain, "launch step must be positive");
  if (h >= 0.1 / std::sqrt(lambda + gp)) {
    throw Error(ErrorCode::StepTooLarge, "launch step " + format_double(h) +
                                             " too large for the local scale");
  }
  const double n = dimension;
  const double f = lambda * xi - eval_g(spec, xi);
  const double fp = lambda - gp;
  const double h2 = h * h;
  const double u = xi + f * h2 / (2.0 * n) + f * fp * h2 * h2 / (8.0 * n * (n + 2.0));
  const double du = f * h / n + f * fp * h2 * h / (2.0 * n * (n + 2.0));
  return {h, u, du};
}

ShootingOutcome integrate_ivp(const NonlinearitySpec& spec, int dimension, double lambda,
                              double xi, const ShootingControls& controls, bool detect_decay,
                              bool record) {
  require_dimension(dimension);
  require_frequency(lambda);
  require_amplitude(xi);
  controls.validate();
  return run_scaled(spec, dimension, lambda, xi, controls, detect_decay, record).outcome;
}

double first_positive_root_F(const NonlinearitySpec& spec, double lambda) {
  require_frequency(lambda);
  // F(s)/s^2 = G(s)/s^2 - lambda/2 is increasing, so the root is unique.
  auto q = [&](double s) {
    double sum = 0.0;
    for (const auto& t : spec.terms()) {
      sum += t.coefficient * std::pow(s, t.exponent - 1.0) / (t.exponent + 1.0);
    }
    return sum - 0.5 * lambda;
  };
  double lo = 1.0, hi = 1.0;
  if (q(1.0) < 0.0) {
    for (int i = 0; q(hi) < 0.0; ++i) {
      if (i > 2000 || !std::isfinite(hi)) {
        throw Error(ErrorCode::AmplitudeRootNotFound, "F stays negative on the scan range");
      }
      lo = hi;
      hi *= 2.0;
    }
  } else {
    for (int i = 0; q(lo) >= 0.0; ++i) {
      if (i > 2000 || lo == 0.0) {
        throw Error(ErrorCode::AmplitudeRootNotFound, "F stays positive near zero");
      }
      hi = lo;
      lo *= 0.5;
    }
  }
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (lo + hi);
    if (m <= lo || m >= hi) break;
    if (q(m) < 0.0) lo = m; else hi = m;
  }
  return std::abs(q(lo)) <= std::abs(q(hi)) ? lo : hi;
}

RadialProfile shoot_ground(const NonlinearitySpec& spec, int dimension, double lambda,
                           const ShootingControls& controls, std::optional<double> hint) {
  require_dimension(dimension);
  require_frequency(lambda);
  controls.validate();
  const double s0 = first_positive_root_F(spec, lambda);

  if (dimension == 1) {
    auto run = run_scaled(spec, 1, lambda, s0, controls, true, true);
    return build_profile(spec, 1, lambda, s0, std::move(run), 1);
  }

  // Dyadic bisection on x = log2(xi / s0) in [0, 32]; the search never
  // looks above x_cap.
  constexpr double span = 32.0;
  constexpr double x_cap = 20.0;
  int shoots = 0;
  auto crosses = [&](double x) {
    ++shoots;
    const auto run = run_scaled(spec, dimension, lambda, s0 * std::exp2(x), controls, false, false);
    return run.outcome.status == ShootingStatus::Crossing;
  };
  const int depth = std::clamp(
      static_cast<int>(std::ceil(std::log2(span * std::log(2.0) / controls.amplitude_tolerance))),
      12, 50);

  double lo = 0.0, hi = 0.0;
  bool bracketed = false;
  if (hint && std::isfinite(*hint) && *hint > 0.0) {
    const double width = span / 128.0;
    const double xh = std::log2(*hint / s0);
    if (xh >= 0.0 && xh < x_cap) {
      lo = std::floor(xh / width) * width;
      hi = lo + width;
      bool lo_ok = !crosses(lo);
      bool hi_ok = hi <= x_cap && crosses(hi);
      for (int step = 0; step < 8 && !lo_ok && lo > 0.0; ++step) {
        hi = lo;
        hi_ok = true;
        lo -= width;
        lo_ok = !crosses(lo);
      }
      for (int step = 0; step < 8 && lo_ok && !hi_ok && hi + width <= x_cap; ++step) {
        lo = hi;
        hi += width;
        hi_ok = crosses(hi);
      }
      bracketed = lo_ok && hi_ok;
    }
  }
  if (!bracketed) {
    if (crosses(0.0)) {
      throw Error(ErrorCode::ShootFailed, "trajectory from s0 already crosses zero");
    }
    lo = 0.0;
    for (double x : {1.0, 2.0, 4.0, 8.0, 16.0, x_cap}) {
      if (crosses(x)) {
        hi = x;
        bracketed = true;
        break;
      }
      lo = x;
    }
    if (!bracketed) {
      throw Error(ErrorCode::ShootFailed, "no amplitude bracket within [s0, 1e6 s0]");
    }
  }
  const double final_width = span * std::exp2(-depth);
  while (hi - lo > final_width) {
    const double mid = 0.5 * (lo + hi);
    if (crosses(mid)) hi = mid; else lo = mid;
  }
  const double xi = s0 * std::exp2(0.5 * (lo + hi));
  auto run = run_scaled(spec, dimension, lambda, xi, controls, true, true);
  return build_profile(spec, dimension, lambda, xi, std::move(run), shoots + 1);
}

void attach_exponential_tail(RadialProfile& p) {
  if (p.r.size() < 2) throw Error(ErrorCode::MissingTail, "profile too short for a tail");
  const double R = p.r.back();
  const double uR = p.u.back();
  const double duR = p.du.back();
  if (!(uR > 0.0) || !(duR < 0.0)) {
    throw Error(ErrorCode::MissingTail, "no decaying state at the match radius");
  }
  const double m = 0.5 * (p.dimension - 1.0);
  const double k = -duR / uR - m / R;
  if (!(k > 0.0)) throw Error(ErrorCode::MissingTail, "fitted tail rate is not positive");
  ExponentialTail tail;
  tail.radius = R;
  tail.rate = k;
  tail.power = m;
  tail.amplitude = std::exp(std::log(uR) + k * R + m * std::log(R));
  p.tail = tail;
  const double mismatch = std::abs(k / std::sqrt(p.lambda) - 1.0);
  if (mismatch > 0.2) {
    p.warnings.push_back("tail rate " + format_double(k) + " differs from sqrt(lambda) by " +
                         format_double(100.0 * mismatch) + "%");
  }
}

void extend_tail_nodes(RadialProfile& p, double radius) {
  if (!p.tail) throw Error(ErrorCode::MissingTail, "cannot extend a profile without a tail");
  const double dr = p.r[1] - p.r[0];
  for (std::size_t i = p.r.size();; ++i) {
    const double x = static_cast<double>(i) * dr;
    if (x > radius) break;
    p.r.push_back(x);
    p.u.push_back(p.tail->value(x));
    p.du.push_back(p.tail->derivative(x));
  }
}

std::vector<double> scan_decay_amplitudes(const NonlinearitySpec& spec, int dimension,
                                          double lambda, double xi_lo, double xi_hi, int points,
                                          const ShootingControls& controls) {
  require_dimension(dimension);
  require_frequency(lambda);
  require_amplitude(xi_lo);
  require_amplitude(xi_hi);
  controls.validate();
  if (!(xi_hi > xi_lo) || points < 2) {
    throw Error(ErrorCode::Domain, "scan needs xi_lo < xi_hi and at least two points");
  }
  auto crosses = [&](double xi) {
    return run_scaled(spec, dimension, lambda, xi, controls, false, false).outcome.status ==
           ShootingStatus::Crossing;
  };
  const double l0 = std::log(xi_lo), l1 = std::log(xi_hi);
  std::vector<double> grid(static_cast<std::size_t>(points));
  std::vector<char> sign(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / (points - 1));
    sign[i] = crosses(grid[i]);
  }
  std::vector<double> found;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (sign[i] == sign[i + 1]) continue;
    double a = std::log(grid[i]), b = std::log(grid[i + 1]);
    const bool a_crosses = sign[i];
    while (b - a > controls.amplitude_tolerance) {
      const double m = 0.5 * (a + b);
      if (crosses(std::exp(m)) == a_crosses) a = m; else b = m;
    }
    found.push_back(std::exp(0.5 * (a + b)));
  }
  return found;
}

Trajectory integrate_trajectory(const NonlinearitySpec& spec, int dimension, double lambda,
                                double xi, double r_end, double dr,
                                const ShootingControls& controls) {
  require_dimension(dimension);
  require_amplitude(xi);
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::Domain, "trajectory needs lambda >= 0");
  }
  if (!(dr > 0.0) || !(r_end > dr)) throw Error(ErrorCode::Domain, "bad sampling range");
  const double h = launch_radius(spec, lambda, xi, controls);
  if (h >= dr) throw Error(ErrorCode::Domain, "sampling step below the launch radius");
  const auto launch = series_start(spec, dimension, lambda, xi, h);

  Dop853Options opt;
  opt.rtol = controls.step_tolerance;
  opt.initial_step = h;
  opt.max_step = 10.0 * dr;
  Dop853 ode(PlainRhs{dimension - 1.0, lambda, plain_source(spec)}, h,
             std::array<double, 2>{launch.u, launch.du}, opt);

  Trajectory out{spec, dimension, lambda, {}, false};
  out.samples.push_back({0.0, xi, 0.0});
  std::size_t next = 1;
  while (ode.t() < r_end) {
    if (ode.step(r_end) == decltype(ode)::StepResult::Underflow) {
      const auto& y = ode.y();
      throw StiffnessError("step size underflow at r = " + format_double(ode.t()),
                           {ode.t(), y[0], y[1]});
    }
    for (; static_cast<double>(next) * dr <= ode.t(); ++next) {
      const double x = static_cast<double>(next) * dr;
      const auto s = ode.dense(x);
      if (!(s[0] > 0.0)) {
        out.crossed = true;
        return out;
      }
      out.samples.push_back({x, s[0], s[1]});
    }
    if (!(ode.y()[0] > 0.0)) {
      out.crossed = true;
      return out;
    }
  }
  return out;
}

}  // namespace nlsb
