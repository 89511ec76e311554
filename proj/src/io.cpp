#include "nlsb/io.hpp"

#include <fstream>
#include <limits>

#include "format.hpp"
#include "json_writer.hpp"
#include "report_json.hpp"

namespace nlsb {

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

void write_profile_csv(const std::filesystem::path& path, const RadialProfile& p) {
  std::string text = "r,u,du\n";
  for (std::size_t i = 0; i < p.r.size(); ++i) {
    text += format_double(p.r[i]) + ',' + format_double(p.u[i]) + ',' + format_double(p.du[i]) +
            '\n';
  }
  write_text_file(path, text);
}

void write_branch_csv(const std::filesystem::path& path, const MassCurve& curve) {
  std::string text = "lambda,rho,K,sup,PG,J,res_poho,res_nehari,mp_gap\n";
  for (const auto& b : curve.points) {
    if (!b.valid) {
      std::string msg = b.message;
      for (char& c : msg) {
        if (c == '\n') c = ' ';
      }
      text += "# lambda=" + format_double(b.lambda) + " failed: " + msg + '\n';
      text += format_double(b.lambda) + ",nan,nan,nan,nan,nan,nan,nan,nan\n";
      continue;
    }
    const double values[] = {b.lambda,           b.mass,           b.kinetic,
                             b.sup,              b.potential,      b.action,
                             b.pohozaev_residual, b.nehari_residual, b.mp_gap};
    for (std::size_t k = 0; k < 9; ++k) {
      text += format_double(values[k]);
      text += k + 1 < 9 ? ',' : '\n';
    }
  }
  write_text_file(path, text);
}

Json branch_point_json(const BranchPoint& b) {
  Json o = Json::object();
  o.set("lambda", b.lambda)
      .set("valid", b.valid)
      .set("rho", b.mass)
      .set("K", b.kinetic)
      .set("sup", b.sup)
      .set("PG", b.potential)
      .set("J", b.action)
      .set("res_poho", b.pohozaev_residual)
      .set("res_nehari", b.nehari_residual)
      .set("mp_gap", b.mp_gap);
  if (!b.valid) o.set("message", b.message);
  return o;
}

Json strings_json(const std::vector<std::string>& items) {
  Json a = Json::array();
  for (const auto& s : items) a.push(s);
  return a;
}

Json report_envelope(const char* subcommand) {
  Json o = Json::object();
  o.set("schema_version", kReportSchemaVersion).set("subcommand", subcommand);
  return o;
}

Json profile_summary_json(const RadialProfile& p) {
  Json o = Json::object();
  o.set("lambda", p.lambda)
      .set("N", p.dimension)
      .set("xi", p.xi)
      .set("tail_C", p.tail ? p.tail->amplitude : std::numeric_limits<double>::quiet_NaN())
      .set("tail_rate", p.tail ? p.tail->rate : std::numeric_limits<double>::quiet_NaN())
      .set("residual_max", p.residual_max)
      .set("match_radius", p.match_radius())
      .set("nodes", p.r.size());
  return o;
}

namespace {

Json exponents_json(const AsymptoticData& ex) {
  Json o = Json::object();
  o.set("alpha", ex.alpha).set("mu1", ex.mu1).set("beta", ex.beta).set("mu2", ex.mu2);
  return o;
}

Json extremum_json(const std::optional<MassExtremum>& e) {
  if (!e) return Json();
  Json o = Json::object();
  o.set("kind", e->maximum ? "maximum" : "minimum")
      .set("lambda", e->lambda)
      .set("mass", e->mass)
      .set("parabolic_lambda", e->parabolic_lambda);
  return o;
}

}  // namespace

std::string check_report_json(const NonlinearitySpec& spec, int dimension) {
  const auto h = check_hypotheses(spec, dimension);
  Json hyp = Json::object();
  hyp.set("g1_ok", h.g1_ok)
      .set("g2_ok", h.g2_ok)
      .set("exponents", exponents_json(h.exponents))
      .set("g3_status", to_string(h.g3_status))
      .set("sobolev_exponent", h.sobolev_exponent)
      .set("alpha_subcritical", h.alpha_subcritical)
      .set("beta_subcritical", h.beta_subcritical);
  Json o = report_envelope("check");
  o.set("g", spec.to_string()).set("N", dimension).set("hypotheses", hyp);
  try {
    const auto label = classify_case(spec, dimension);
    o.set("case", to_string(label)).set("experimental", is_experimental(label)).set("error", Json());
  } catch (const Error& e) {
    o.set("case", Json()).set("experimental", false).set("error", e.what());
  }
  return o.dump();
}

std::string shoot_report_json(const RadialProfile& p) {
  Json o = report_envelope("shoot");
  o.set("g", p.spec.to_string())
      .set("profile", profile_summary_json(p))
      .set("diagnostics", branch_point_json(evaluate_branch_point(p)))
      .set("warnings", strings_json(p.warnings));
  return o.dump();
}

std::string ground_state_report_json(const GroundState& s) {
  Json o = report_envelope("ground-state");
  o.set("N", s.dimension)
      .set("p", s.exponent)
      .set("mu", s.coefficient)
      .set("mass", s.mass)
      .set("u0", s.central_value)
      .set("profile", profile_summary_json(s.profile))
      .set("diagnostics", branch_point_json(evaluate_branch_point(s.profile)))
      .set("warnings", strings_json(s.profile.warnings));
  return o.dump();
}

std::string branch_report_json(const MassCurve& curve, const NonlinearitySpec& spec, int dimension,
                               const std::optional<MassExtremum>& extremum) {
  const auto fit = fit_asymptotic_exponents(curve, spec, dimension);
  Json grid = Json::object();
  grid.set("lambda_min", curve.lambda_min)
      .set("lambda_max", curve.lambda_max)
      .set("points_per_decade", curve.points_per_decade)
      .set("points", curve.points.size())
      .set("failures", curve.failures());
  Json o = report_envelope("branch");
  o.set("g", spec.to_string())
      .set("N", dimension)
      .set("grid", grid)
      .set("e0", fit.e0)
      .set("einf", fit.einf)
      .set("theory_e0", fit.theory_e0)
      .set("theory_einf", fit.theory_einf)
      .set("extremum", extremum_json(extremum))
      .set("warnings", strings_json(curve.warnings));
  return o.dump();
}

std::string normalize_report_json(const CaseReport& r, const NonlinearitySpec& spec) {
  Json thresholds = Json::object();
  thresholds.set("critical_low", r.thresholds.critical_low)
      .set("critical_high", r.thresholds.critical_high)
      .set("extremum", extremum_json(r.thresholds.extremum))
      .set("observed_min_mass", r.observed_min_mass)
      .set("observed_max_mass", r.observed_max_mass);
  Json prediction = Json::object();
  prediction.set("kind", to_string(r.prediction.kind))
      .set("guaranteed_roots", r.prediction.guaranteed_roots)
      .set("threshold_low", r.prediction.threshold_low)
      .set("threshold_high", r.prediction.threshold_high)
      .set("clause", r.prediction.clause);
  Json roots = Json::array();
  for (std::size_t k = 0; k < r.roots.size(); ++k) {
    Json root = branch_point_json(r.roots[k].point);
    root.set("xi", r.roots[k].profile.xi)
        .set("profile_csv", "profile_root_" + std::to_string(k) + ".csv");
    roots.push(root);
  }
  Json grid = Json::object();
  grid.set("lambda_min", r.curve.lambda_min)
      .set("lambda_max", r.curve.lambda_max)
      .set("points_per_decade", r.curve.points_per_decade)
      .set("points", r.curve.points.size())
      .set("failures", r.curve.failures());
  Json o = report_envelope("normalize");
  o.set("g", spec.to_string())
      .set("N", r.dimension)
      .set("a", r.target)
      .set("case", to_string(r.label))
      .set("experimental", r.experimental)
      .set("mass_critical_exponent", r.mass_critical)
      .set("exponents", exponents_json(r.exponents))
      .set("thresholds", thresholds)
      .set("prediction", prediction)
      .set("roots", roots)
      .set("status", r.prediction_met ? "PREDICTION-MET" : "PREDICTION-UNMET")
      .set("grid", grid)
      .set("warnings", strings_json(r.warnings));
  return o.dump();
}

}  // namespace nlsb
