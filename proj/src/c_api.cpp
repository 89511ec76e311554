#include "nlsb/nlsb.h"

#include <cmath>
#include <filesystem>
#include <new>
#include <string>

#include "nlsb/branch.hpp"
#include "nlsb/ground_states.hpp"
#include "nlsb/io.hpp"
#include "nlsb/normalized_solver.hpp"
#include "nlsb/verification.hpp"

struct nlsb_spec {
  nlsb::NonlinearitySpec spec;
  std::string text;
};

struct nlsb_profile {
  nlsb::RadialProfile profile;
};

struct nlsb_ground_state {
  nlsb::GroundState state;
  nlsb_profile view;
};

struct nlsb_curve {
  nlsb::MassCurve curve;
  nlsb::NonlinearitySpec spec;
  int dimension;
  nlsb::ShootingControls controls;
  bool extremum_done;
  std::optional<nlsb::MassExtremum> extremum;
};

struct nlsb_case_report {
  nlsb::CaseReport report;
  nlsb::NonlinearitySpec spec;
};

namespace {

thread_local std::string last_error;

nlsb_status status_of(nlsb::ErrorCode code) {
  using nlsb::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidSpec: return NLSB_INVALID_SPEC;
    case ErrorCode::Domain: return NLSB_DOMAIN;
    case ErrorCode::OutOfScope: return NLSB_OUT_OF_SCOPE;
    case ErrorCode::SweepDegenerate: return NLSB_SWEEP_DEGENERATE;
    case ErrorCode::Io: return NLSB_IO;
    default: return NLSB_NUMERICAL;
  }
}

nlsb_status fail(nlsb_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs body, translating exceptions into status codes.
template <class F>
nlsb_status guard(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const nlsb::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(NLSB_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(NLSB_INTERNAL, e.what());
  }
}

#define NLSB_REQUIRE(cond, what) \
  if (!(cond)) return fail(NLSB_INVALID_ARGUMENT, what)

nlsb::ShootingControls to_controls(const nlsb_controls* c) {
  nlsb::ShootingControls out;
  if (!c) return out;
  out.step_tolerance = c->step_tolerance;
  out.max_scaled_radius = c->max_scaled_radius;
  out.amplitude_tolerance = c->amplitude_tolerance;
  out.decay_threshold = c->decay_threshold;
  out.cone_width = c->cone_width;
  out.divergence_threshold = c->divergence_threshold;
  out.node_spacing = c->node_spacing;
  out.launch_scale = c->launch_scale;
  out.validate();
  return out;
}

nlsb::SweepOptions to_sweep(const nlsb_sweep_options* o) {
  nlsb::SweepOptions out;
  if (!o) return out;
  out.lambda_min = o->lambda_min;
  out.lambda_max = o->lambda_max;
  out.points_per_decade = o->points_per_decade;
  out.jobs = o->jobs;
  out.warm_start = o->warm_start != 0;
  out.max_failure_fraction = o->max_failure_fraction;
  out.controls = to_controls(&o->controls);
  return out;
}

nlsb_exponents to_c(const nlsb::AsymptoticData& d) { return {d.alpha, d.mu1, d.beta, d.mu2}; }

nlsb_branch_point to_c(const nlsb::BranchPoint& b) {
  return {b.lambda, b.mass, b.kinetic, b.sup, b.potential, b.action, b.pohozaev_residual,
          b.nehari_residual, b.mp_gap, b.valid ? 1 : 0};
}

}  // namespace

extern "C" {

const char* nlsb_version(void) { return "1.0.0"; }

const char* nlsb_status_string(nlsb_status status) {
  switch (status) {
    case NLSB_OK: return "ok";
    case NLSB_DOMAIN: return "domain error";
    case NLSB_INVALID_SPEC: return "invalid nonlinearity";
    case NLSB_OUT_OF_SCOPE: return "out of scope";
    case NLSB_NUMERICAL: return "numerical failure";
    case NLSB_SWEEP_DEGENERATE: return "sweep degenerate";
    case NLSB_PREDICTION_UNMET: return "prediction unmet";
    case NLSB_IO: return "i/o error";
    case NLSB_INVALID_ARGUMENT: return "invalid argument";
    case NLSB_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* nlsb_last_error(void) { return last_error.c_str(); }

int nlsb_exit_code(nlsb_status status) {
  switch (status) {
    case NLSB_OK: return 0;
    case NLSB_DOMAIN:
    case NLSB_INVALID_SPEC:
    case NLSB_OUT_OF_SCOPE:
    case NLSB_INVALID_ARGUMENT: return 1;
    case NLSB_PREDICTION_UNMET: return 3;
    default: return 2;
  }
}

void nlsb_controls_default(nlsb_controls* out) {
  if (!out) return;
  const nlsb::ShootingControls d;
  *out = {d.step_tolerance, d.max_scaled_radius, d.amplitude_tolerance, d.decay_threshold,
          d.cone_width, d.divergence_threshold, d.node_spacing, d.launch_scale};
}

void nlsb_sweep_options_default(nlsb_sweep_options* out) {
  if (!out) return;
  const nlsb::SweepOptions d;
  out->lambda_min = d.lambda_min;
  out->lambda_max = d.lambda_max;
  out->points_per_decade = d.points_per_decade;
  out->jobs = d.jobs;
  out->warm_start = d.warm_start ? 1 : 0;
  out->max_failure_fraction = d.max_failure_fraction;
  nlsb_controls_default(&out->controls);
}

nlsb_status nlsb_spec_parse(const char* text, nlsb_spec** out) {
  NLSB_REQUIRE(text && out, "null argument");
  *out = nullptr;
  return guard([&] {
    auto spec = nlsb::NonlinearitySpec::parse(text);
    auto canonical = spec.to_string();
    *out = new nlsb_spec{std::move(spec), std::move(canonical)};
    return NLSB_OK;
  });
}

void nlsb_spec_free(nlsb_spec* spec) { delete spec; }

const char* nlsb_spec_string(const nlsb_spec* spec) { return spec ? spec->text.c_str() : ""; }

nlsb_status nlsb_spec_eval_g(const nlsb_spec* spec, double s, double* out) {
  NLSB_REQUIRE(spec && out, "null argument");
  return guard([&] {
    *out = nlsb::eval_g(spec->spec, s);
    return NLSB_OK;
  });
}

nlsb_status nlsb_spec_exponents(const nlsb_spec* spec, nlsb_exponents* out) {
  NLSB_REQUIRE(spec && out, "null argument");
  return guard([&] {
    *out = to_c(nlsb::asymptotic_exponents(spec->spec));
    return NLSB_OK;
  });
}

nlsb_status nlsb_check_hypotheses(const nlsb_spec* spec, int dimension, nlsb_hypotheses* out) {
  NLSB_REQUIRE(spec && out, "null argument");
  return guard([&] {
    const auto h = nlsb::check_hypotheses(spec->spec, dimension);
    *out = {h.g1_ok ? 1 : 0,
            h.g2_ok ? 1 : 0,
            to_c(h.exponents),
            nlsb::to_string(h.g3_status),
            h.sobolev_exponent,
            h.alpha_subcritical ? 1 : 0,
            h.beta_subcritical ? 1 : 0};
    return NLSB_OK;
  });
}

nlsb_status nlsb_classify_case(const nlsb_spec* spec, int dimension, const char** label) {
  NLSB_REQUIRE(spec && label, "null argument");
  *label = nullptr;
  return guard([&] {
    *label = nlsb::to_string(nlsb::classify_case(spec->spec, dimension));
    return NLSB_OK;
  });
}

nlsb_status nlsb_write_check_report(const nlsb_spec* spec, int dimension, const char* path) {
  NLSB_REQUIRE(spec && path, "null argument");
  return guard([&] {
    nlsb::write_text_file(path, nlsb::check_report_json(spec->spec, dimension));
    return NLSB_OK;
  });
}

nlsb_status nlsb_shoot(const nlsb_spec* spec, int dimension, double lambda,
                       const nlsb_controls* controls, nlsb_profile** out) {
  NLSB_REQUIRE(spec && out, "null argument");
  *out = nullptr;
  return guard([&] {
    auto p = nlsb::shoot_ground(spec->spec, dimension, lambda, to_controls(controls));
    *out = new nlsb_profile{std::move(p)};
    return NLSB_OK;
  });
}

void nlsb_profile_free(nlsb_profile* profile) { delete profile; }

size_t nlsb_profile_size(const nlsb_profile* profile) {
  return profile ? profile->profile.r.size() : 0;
}

nlsb_status nlsb_profile_node(const nlsb_profile* profile, size_t index, double* r, double* u,
                              double* du) {
  NLSB_REQUIRE(profile, "null argument");
  const auto& p = profile->profile;
  NLSB_REQUIRE(index < p.r.size(), "node index out of range");
  if (r) *r = p.r[index];
  if (u) *u = p.u[index];
  if (du) *du = p.du[index];
  return NLSB_OK;
}

double nlsb_profile_amplitude(const nlsb_profile* profile) {
  return profile ? profile->profile.xi : NAN;
}

double nlsb_profile_residual(const nlsb_profile* profile) {
  return profile ? profile->profile.residual_max : NAN;
}

nlsb_status nlsb_profile_value_at(const nlsb_profile* profile, double r, double* out) {
  NLSB_REQUIRE(profile && out, "null argument");
  return guard([&] {
    *out = profile->profile.value_at(r);
    return NLSB_OK;
  });
}

nlsb_status nlsb_profile_tail(const nlsb_profile* profile, nlsb_tail* out) {
  NLSB_REQUIRE(profile && out, "null argument");
  const auto& t = profile->profile.tail;
  if (!t) return fail(NLSB_NUMERICAL, "profile has no tail");
  *out = {t->radius, t->amplitude, t->rate, t->power};
  return NLSB_OK;
}

nlsb_status nlsb_profile_diagnostics(const nlsb_profile* profile, nlsb_branch_point* out) {
  NLSB_REQUIRE(profile && out, "null argument");
  return guard([&] {
    *out = to_c(nlsb::evaluate_branch_point(profile->profile));
    return NLSB_OK;
  });
}

size_t nlsb_profile_warning_count(const nlsb_profile* profile) {
  return profile ? profile->profile.warnings.size() : 0;
}

const char* nlsb_profile_warning(const nlsb_profile* profile, size_t index) {
  if (!profile || index >= profile->profile.warnings.size()) return nullptr;
  return profile->profile.warnings[index].c_str();
}

nlsb_status nlsb_write_profile_csv(const nlsb_profile* profile, const char* path) {
  NLSB_REQUIRE(profile && path, "null argument");
  return guard([&] {
    nlsb::write_profile_csv(path, profile->profile);
    return NLSB_OK;
  });
}

nlsb_status nlsb_write_shoot_report(const nlsb_profile* profile, const char* path) {
  NLSB_REQUIRE(profile && path, "null argument");
  return guard([&] {
    nlsb::write_text_file(path, nlsb::shoot_report_json(profile->profile));
    return NLSB_OK;
  });
}

nlsb_status nlsb_ground_state_compute(int dimension, double exponent, double coefficient,
                                      const nlsb_controls* controls, nlsb_ground_state** out) {
  NLSB_REQUIRE(out, "null argument");
  *out = nullptr;
  return guard([&] {
    auto s = nlsb::kwong_ground_state(dimension, exponent, coefficient, to_controls(controls));
    nlsb_profile view{s.profile};
    *out = new nlsb_ground_state{std::move(s), std::move(view)};
    return NLSB_OK;
  });
}

void nlsb_ground_state_free(nlsb_ground_state* state) { delete state; }

double nlsb_ground_state_mass(const nlsb_ground_state* state) {
  return state ? state->state.mass : NAN;
}

double nlsb_ground_state_central_value(const nlsb_ground_state* state) {
  return state ? state->state.central_value : NAN;
}

const nlsb_profile* nlsb_ground_state_profile(const nlsb_ground_state* state) {
  return state ? &state->view : nullptr;
}

nlsb_status nlsb_write_ground_state_report(const nlsb_ground_state* state, const char* path) {
  NLSB_REQUIRE(state && path, "null argument");
  return guard([&] {
    nlsb::write_text_file(path, nlsb::ground_state_report_json(state->state));
    return NLSB_OK;
  });
}

nlsb_status nlsb_sweep(const nlsb_spec* spec, int dimension, const nlsb_sweep_options* options,
                       nlsb_curve** out) {
  NLSB_REQUIRE(spec && out, "null argument");
  *out = nullptr;
  return guard([&] {
    const auto sweep = to_sweep(options);
    try {
      auto curve = nlsb::sweep_branch(spec->spec, dimension, sweep);
      *out = new nlsb_curve{std::move(curve), spec->spec, dimension, sweep.controls, false, std::nullopt};
      return NLSB_OK;
    } catch (const nlsb::SweepDegenerateError& e) {
      *out = new nlsb_curve{e.partial(), spec->spec, dimension, sweep.controls, false, std::nullopt};
      return fail(NLSB_SWEEP_DEGENERATE, e.what());
    }
  });
}

void nlsb_curve_free(nlsb_curve* curve) { delete curve; }

size_t nlsb_curve_size(const nlsb_curve* curve) { return curve ? curve->curve.points.size() : 0; }

nlsb_status nlsb_curve_point(const nlsb_curve* curve, size_t index, nlsb_branch_point* out) {
  NLSB_REQUIRE(curve && out, "null argument");
  NLSB_REQUIRE(index < curve->curve.points.size(), "point index out of range");
  *out = to_c(curve->curve.points[index]);
  return NLSB_OK;
}

nlsb_status nlsb_curve_exponents(const nlsb_curve* curve, nlsb_exponent_fit* out) {
  NLSB_REQUIRE(curve && out, "null argument");
  return guard([&] {
    const auto fit = nlsb::fit_asymptotic_exponents(curve->curve, curve->spec, curve->dimension);
    *out = {fit.e0.has_value() ? 1 : 0, fit.e0.value_or(NAN),
            fit.einf.has_value() ? 1 : 0, fit.einf.value_or(NAN),
            fit.theory_e0, fit.theory_einf};
    return NLSB_OK;
  });
}

nlsb_status nlsb_curve_extremum(nlsb_curve* curve, nlsb_extremum* out, int* found) {
  NLSB_REQUIRE(curve && out && found, "null argument");
  return guard([&] {
    if (!curve->extremum_done) {
      curve->extremum = nlsb::locate_mass_extremum(curve->curve, curve->spec, curve->dimension,
                                                   curve->controls);
      curve->extremum_done = true;
    }
    *found = curve->extremum ? 1 : 0;
    if (curve->extremum) {
      *out = {curve->extremum->lambda, curve->extremum->mass, curve->extremum->maximum ? 1 : 0};
    } else {
      *out = {NAN, NAN, 0};
    }
    return NLSB_OK;
  });
}

nlsb_status nlsb_write_branch_csv(const nlsb_curve* curve, const char* path) {
  NLSB_REQUIRE(curve && path, "null argument");
  return guard([&] {
    nlsb::write_branch_csv(path, curve->curve);
    return NLSB_OK;
  });
}

nlsb_status nlsb_write_branch_report(nlsb_curve* curve, const char* path) {
  NLSB_REQUIRE(curve && path, "null argument");
  return guard([&] {
    if (!curve->extremum_done) {
      // A partial curve may not support refinement; report it without one.
      try {
        curve->extremum = nlsb::locate_mass_extremum(curve->curve, curve->spec,
                                                     curve->dimension, curve->controls);
      } catch (const nlsb::Error& e) {
        curve->curve.warnings.push_back(std::string("extremum not located: ") + e.what());
      }
      curve->extremum_done = true;
    }
    nlsb::write_text_file(path, nlsb::branch_report_json(curve->curve, curve->spec,
                                                         curve->dimension, curve->extremum));
    return NLSB_OK;
  });
}

nlsb_status nlsb_solve_normalized(const nlsb_spec* spec, int dimension, double a,
                                  const nlsb_sweep_options* options, nlsb_case_report** out) {
  NLSB_REQUIRE(spec && out, "null argument");
  *out = nullptr;
  return guard([&] {
    nlsb::NormalizedOptions o;
    if (options) o.sweep = to_sweep(options);
    auto report = nlsb::solve_normalized(spec->spec, dimension, a, o);
    *out = new nlsb_case_report{std::move(report), spec->spec};
    return NLSB_OK;
  });
}

void nlsb_case_report_free(nlsb_case_report* report) { delete report; }

const char* nlsb_case_report_label(const nlsb_case_report* report) {
  return report ? nlsb::to_string(report->report.label) : "";
}

int nlsb_case_report_prediction_met(const nlsb_case_report* report) {
  return report && report->report.prediction_met ? 1 : 0;
}

size_t nlsb_case_report_root_count(const nlsb_case_report* report) {
  return report ? report->report.roots.size() : 0;
}

nlsb_status nlsb_case_report_root(const nlsb_case_report* report, size_t index,
                                  nlsb_branch_point* out) {
  NLSB_REQUIRE(report && out, "null argument");
  NLSB_REQUIRE(index < report->report.roots.size(), "root index out of range");
  *out = to_c(report->report.roots[index].point);
  return NLSB_OK;
}

nlsb_status nlsb_write_case_report(const nlsb_case_report* report, const char* dir) {
  NLSB_REQUIRE(report && dir, "null argument");
  return guard([&] {
    const std::filesystem::path base(dir);
    const auto& roots = report->report.roots;
    for (std::size_t k = 0; k < roots.size(); ++k) {
      nlsb::write_profile_csv(base / ("profile_root_" + std::to_string(k) + ".csv"),
                              roots[k].profile);
    }
    nlsb::write_text_file(base / "report.json",
                          nlsb::normalize_report_json(report->report, report->spec));
    return NLSB_OK;
  });
}

nlsb_status nlsb_verify(const char* dir, int jobs, nlsb_criterion_callback callback, void* user,
                        int* all_passed) {
  NLSB_REQUIRE(dir && all_passed, "null argument");
  NLSB_REQUIRE(jobs >= 1, "jobs must be >= 1");
  return guard([&] {
    nlsb::VerificationOptions o;
    o.jobs = jobs;
    const auto report = nlsb::run_verification_to(dir, o);
    if (callback) {
      for (const auto& c : report.criteria) callback(c.id, c.title.c_str(), c.passed ? 1 : 0, user);
    }
    *all_passed = report.all_passed() ? 1 : 0;
    return NLSB_OK;
  });
}

}  // extern "C"
