#include "nlsb/verification.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>

#include "format.hpp"
#include "json_writer.hpp"
#include "nlsb/branch.hpp"
#include "nlsb/diagnostics.hpp"
#include "nlsb/ground_states.hpp"
#include "nlsb/io.hpp"
#include "nlsb/normalized_solver.hpp"
#include "report_json.hpp"

namespace nlsb {

bool VerificationReport::all_passed() const {
  return std::all_of(criteria.begin(), criteria.end(),
                     [](const CriterionResult& c) { return c.passed; });
}

namespace {

struct Collector {
  std::mutex mutex;
  std::vector<BranchPoint> points;

  void add(const BranchPoint& b) {
    std::lock_guard lock(mutex);
    points.push_back(b);
  }
  std::function<void(const BranchPoint&)> observer() {
    return [this](const BranchPoint& b) { add(b); };
  }
};

CriterionResult make(int id, std::string title) {
  CriterionResult c;
  c.id = id;
  c.title = std::move(title);
  return c;
}

double rel(double value, double reference) { return std::abs(value - reference) / std::abs(reference); }

CriterionResult soliton(Collector& seen) {
  CriterionResult c = make(1, "cubic soliton in one dimension");
  const auto p = shoot_ground(NonlinearitySpec::parse("1*s^3"), 1, 1.0);
  seen.add(evaluate_branch_point(p));
  const double u0_err = std::abs(p.u.front() - std::sqrt(2.0));
  const double mass_err = std::abs(compute_mass(p) - 4.0);
  double sup = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double r = 1e-3 * i;
    sup = std::max(sup, std::abs(p.value_at(r) - std::sqrt(2.0) / std::cosh(r)));
  }
  c.measured = {{"u0_error", u0_err}, {"mass_error", mass_err}, {"sup_error", sup}};
  c.passed = u0_err <= 1e-8 && mass_err <= 1e-6 && sup < 1e-6;
  return c;
}

CriterionResult mass_law(Collector& seen) {
  CriterionResult c = make(2, "pure-power mass law");
  double worst = 0.0;
  for (const auto& [n, p] : {std::pair{1, 3.0}, std::pair{3, 3.0}}) {
    const NonlinearitySpec spec({{1.0, p}});
    const auto base = shoot_ground(spec, n, 1.0);
    seen.add(evaluate_branch_point(base));
    const double m1 = compute_mass(base);
    for (double lambda : {0.25, 4.0}) {
      const auto prof = shoot_ground(spec, n, lambda);
      const auto b = evaluate_branch_point(prof);
      seen.add(b);
      const double e = rel(b.mass / m1, pure_power_mass_factor(n, p, lambda));
      c.measured.push_back({"rel_error_N" + std::to_string(n) + "_lambda_" +
                                format_shortest(lambda),
                            e});
      worst = std::max(worst, e);
    }
  }
  c.passed = worst <= 1e-4;
  return c;
}

CriterionResult critical_constancy(Collector& seen, int jobs) {
  CriterionResult c = make(3, "mass-critical constancy");
  SweepOptions o;
  o.lambda_min = 1e-2;
  o.lambda_max = 1e2;
  o.jobs = jobs;
  o.observer = seen.observer();
  const auto curve = sweep_branch(NonlinearitySpec::parse("1*s^5"), 1, o);
  const double exact = std::sqrt(3.0) * M_PI / 2.0;
  double worst = 0.0, lo = INFINITY, hi = -INFINITY;
  for (const auto& b : curve.points) {
    if (!b.valid) {
      worst = INFINITY;
      continue;
    }
    worst = std::max(worst, rel(b.mass, exact));
    lo = std::min(lo, b.mass);
    hi = std::max(hi, b.mass);
  }
  c.measured = {{"max_rel_deviation", worst}, {"variation", (hi - lo) / exact}};
  c.passed = worst < 1e-4;
  return c;
}

CriterionResult exponents(Collector& seen, int jobs) {
  CriterionResult c = make(4, "asymptotic exponents");
  const auto spec = NonlinearitySpec::parse("1*s^2 + 1*s^3");
  SweepOptions o;
  o.jobs = jobs;
  o.observer = seen.observer();
  const auto curve = sweep_branch(spec, 2, o);
  const auto fit = fit_asymptotic_exponents(curve, spec, 2);
  const auto v = kwong_ground_state(2, 3.0, 1.0);
  seen.add(evaluate_branch_point(v.profile));
  const auto& last = curve.points.back();
  const double e0 = fit.e0.value_or(NAN), einf = fit.einf.value_or(NAN);
  const double gap = last.valid ? rel(last.mass, v.mass) : INFINITY;
  c.measured = {{"e0", e0}, {"einf", einf}, {"theory_e0", fit.theory_e0},
                {"theory_einf", fit.theory_einf}, {"rho_at_1e4", last.mass}, {"V_mass", v.mass},
                {"rel_gap", gap}};
  c.passed = std::abs(e0 - 1.0) <= 0.05 && std::abs(einf) <= 0.05 && gap <= 0.02;
  return c;
}

CriterionResult multiplicity(Collector& seen, int jobs) {
  CriterionResult c = make(5, "mixed-case multiplicity");
  const auto spec = NonlinearitySpec::parse("1*s^2 + 1*s^5");
  NormalizedOptions o;
  o.sweep.jobs = jobs;
  o.sweep.observer = seen.observer();
  const auto curve = sweep_branch(spec, 2, o.sweep);
  const auto ext = locate_mass_extremum(curve, spec, 2, {}, 1e-6, seen.observer());
  if (!ext || !ext->maximum) {
    c.detail = "no interior mass maximum";
    return c;
  }
  const double a = 0.5 * ext->mass;
  const auto low = solve_normalized(spec, 2, a, o);
  const auto high = solve_normalized(spec, 2, 2.0 * ext->mass, o);
  bool below = false, above = false, accurate = true;
  double worst = 0.0;
  for (const auto& r : low.roots) {
    below = below || r.lambda < ext->lambda;
    above = above || r.lambda > ext->lambda;
    const double e = rel(r.point.mass, a);
    worst = std::max(worst, e);
    accurate = accurate && e <= 1e-6;
  }
  c.measured = {{"lambda_star", ext->lambda},
                {"a_star", ext->mass},
                {"roots_at_half", static_cast<double>(low.roots.size())},
                {"max_root_rel_error", worst},
                {"roots_at_double", static_cast<double>(high.roots.size())}};
  c.passed = low.roots.size() >= 2 && below && above && accurate && high.roots.empty();
  return c;
}

CriterionResult identities(const Collector& seen) {
  CriterionResult c = make(6, "identity residuals");
  double poho = 0.0, neh = 0.0, gap = 0.0;
  std::size_t invalid = 0;
  for (const auto& b : seen.points) {
    if (!b.valid) {
      ++invalid;
      continue;
    }
    poho = std::max(poho, b.pohozaev_residual);
    neh = std::max(neh, b.nehari_residual);
    gap = std::max(gap, b.mp_gap);
  }
  c.measured = {{"profiles", static_cast<double>(seen.points.size())},
                {"failed", static_cast<double>(invalid)},
                {"max_pohozaev", poho},
                {"max_nehari", neh},
                {"max_mp_gap", gap}};
  c.passed = invalid == 0 && !seen.points.empty() && poho < 1e-5 && neh < 1e-5 && gap < 1e-5;
  return c;
}

CriterionResult mu_scaling() {
  CriterionResult c = make(7, "coefficient scaling");
  const auto base = kwong_ground_state(1, 3.0, 1.0);
  const auto scaled = kwong_ground_state(1, 3.0, 4.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < base.profile.r.size(); ++i) {
    const double r = base.profile.r[i];
    worst = std::max(worst, std::abs(scaled.profile.value_at(r) - 0.5 * base.profile.u[i]));
  }
  const double mass_err = std::abs(scaled.mass - 1.0);
  c.measured = {{"max_node_error", worst}, {"mass_error", mass_err}};
  c.passed = worst <= 1e-8 && mass_err <= 1e-6;
  return c;
}

CriterionResult rescaled_convergence() {
  CriterionResult c = make(8, "rescaled convergence");
  const auto spec = NonlinearitySpec::parse("1*s^2 + 1*s^5");
  const auto u = kwong_ground_state(2, 2.0, 1.0);
  std::vector<double> d;
  for (double lambda : {1e-1, 1e-2, 1e-3}) {
    const auto p = shoot_ground(spec, 2, lambda);
    const auto v = rescale_profile(p, Regime::Small, u.profile.r);
    d.push_back(sup_distance(v, u.profile));
    c.measured.push_back({"sup_distance_lambda_" + format_shortest(lambda), d.back()});
  }
  c.passed = d[2] < 0.05 && d[0] > d[1] && d[1] > d[2];
  return c;
}

template <class F>
bool throws_with(F&& f, ErrorKind kind, const std::string& fragment) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind && std::string(e.what()).find(fragment) != std::string::npos;
  }
  return false;
}

CriterionResult input_validation() {
  CriterionResult c = make(9, "input validation");
  const auto cubic = NonlinearitySpec::parse("1*s^3");
  const std::string no_positive = "no positive solutions exist for lambda <= 0";
  const bool neg = throws_with([&] { shoot_ground(cubic, 1, -1.0); }, ErrorKind::Domain, no_positive);
  const bool zero = throws_with([&] { shoot_ground(cubic, 1, 0.0); }, ErrorKind::Domain, no_positive);
  const bool a0 = throws_with([&] { solve_normalized(cubic, 1, 0.0); }, ErrorKind::Domain, "a must be positive");
  const bool aneg = throws_with([&] { solve_normalized(cubic, 1, -1.0); }, ErrorKind::Domain, "a must be positive");
  const auto quintic = NonlinearitySpec::parse("1*s^5");
  const bool critical = throws_with([&] { classify_case(quintic, 3); }, ErrorKind::Domain, "2*");
  const bool flagged = !check_hypotheses(quintic, 3).beta_subcritical;
  c.measured = {{"lambda_negative_rejected", neg ? 1.0 : 0.0},
                {"lambda_zero_rejected", zero ? 1.0 : 0.0},
                {"a_zero_rejected", a0 ? 1.0 : 0.0},
                {"a_negative_rejected", aneg ? 1.0 : 0.0},
                {"sobolev_critical_rejected", critical ? 1.0 : 0.0},
                {"sobolev_critical_flagged", flagged ? 1.0 : 0.0}};
  c.passed = neg && zero && a0 && aneg && critical && flagged;
  return c;
}

template <class F>
CriterionResult guarded(int id, const char* title, F&& run) {
  try {
    return run();
  } catch (const std::exception& e) {
    CriterionResult c = make(id, title);
    c.detail = std::string("exception: ") + e.what();
    return c;
  }
}

std::vector<CriterionResult> run_criteria(int jobs) {
  Collector seen;
  std::vector<CriterionResult> out;
  out.push_back(guarded(1, "cubic soliton in one dimension", [&] { return soliton(seen); }));
  out.push_back(guarded(2, "pure-power mass law", [&] { return mass_law(seen); }));
  out.push_back(guarded(3, "mass-critical constancy", [&] { return critical_constancy(seen, jobs); }));
  out.push_back(guarded(4, "asymptotic exponents", [&] { return exponents(seen, jobs); }));
  out.push_back(guarded(5, "mixed-case multiplicity", [&] { return multiplicity(seen, jobs); }));
  out.push_back(guarded(6, "identity residuals", [&] { return identities(seen); }));
  out.push_back(guarded(7, "coefficient scaling", [] { return mu_scaling(); }));
  out.push_back(guarded(8, "rescaled convergence", [] { return rescaled_convergence(); }));
  out.push_back(guarded(9, "input validation", [] { return input_validation(); }));
  return out;
}

Json criterion_json(const CriterionResult& c) {
  Json measured = Json::object();
  for (const auto& m : c.measured) measured.set(m.name, m.value);
  Json o = Json::object();
  o.set("id", c.id).set("title", c.title).set("passed", c.passed).set("measured", measured);
  o.set("detail", c.detail);
  return o;
}

std::string criteria_text(const std::vector<CriterionResult>& criteria) {
  Json a = Json::array();
  for (const auto& c : criteria) a.push(criterion_json(c));
  return a.dump();
}

}  // namespace

VerificationReport run_verification(const VerificationOptions& options) {
  VerificationReport report;
  report.criteria = run_criteria(std::max(1, options.jobs));
  CriterionResult det = make(10, "determinism");
  if (options.check_determinism) {
    const auto again = run_criteria(1);
    const bool same = criteria_text(report.criteria) == criteria_text(again);
    det.measured = {{"identical", same ? 1.0 : 0.0}};
    det.passed = same;
    det.detail = "criteria 1-9 re-run serially and compared byte for byte";
  } else {
    det.detail = "skipped";
  }
  report.criteria.push_back(det);
  return report;
}

std::string verify_report_json(const VerificationReport& report) {
  Json criteria = Json::array();
  for (const auto& c : report.criteria) criteria.push(criterion_json(c));
  Json o = report_envelope("verify");
  o.set("all_passed", report.all_passed()).set("criteria", criteria);
  return o.dump();
}

VerificationReport run_verification_to(const std::filesystem::path& out_dir,
                                       const VerificationOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + out_dir.string() + ": " + ec.message());
  auto report = run_verification(options);
  write_text_file(out_dir / "report.json", verify_report_json(report));
  return report;
}

}  // namespace nlsb
