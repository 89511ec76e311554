#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "nlsb/nlsb.h"

extern "C" int nlsb_c_header_check(void);

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("nlsb_capi_" + std::to_string(::getpid()) + "_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Spec {
  nlsb_spec* h = nullptr;
  explicit Spec(const char* text) { REQUIRE(nlsb_spec_parse(text, &h) == NLSB_OK); }
  ~Spec() { nlsb_spec_free(h); }
};

}  // namespace

TEST_CASE("header compiles as C and works from C") { CHECK(nlsb_c_header_check() == 1); }

TEST_CASE("status strings and exit codes") {
  CHECK(nlsb_exit_code(NLSB_OK) == 0);
  for (auto s : {NLSB_DOMAIN, NLSB_INVALID_SPEC, NLSB_OUT_OF_SCOPE, NLSB_INVALID_ARGUMENT}) {
    CHECK(nlsb_exit_code(s) == 1);
  }
  for (auto s : {NLSB_NUMERICAL, NLSB_SWEEP_DEGENERATE, NLSB_IO, NLSB_INTERNAL}) CHECK(nlsb_exit_code(s) == 2);
  CHECK(nlsb_exit_code(NLSB_PREDICTION_UNMET) == 3);
  CHECK(std::string(nlsb_status_string(NLSB_DOMAIN)) == "domain error");
  CHECK(std::strlen(nlsb_version()) > 0);
}

TEST_CASE("spec handles") {
  nlsb_spec* spec = nullptr;
  CHECK(nlsb_spec_parse("1*s^", &spec) == NLSB_INVALID_SPEC);
  CHECK(spec == nullptr);
  CHECK(std::strlen(nlsb_last_error()) > 0);
  CHECK(nlsb_spec_parse(nullptr, &spec) == NLSB_INVALID_ARGUMENT);

  Spec g("2*s^5 + 1*s^2");
  CHECK(std::string(nlsb_spec_string(g.h)) == "g = 1*s^2 + 2*s^5");
  double v = 0.0;
  REQUIRE(nlsb_spec_eval_g(g.h, 2.0, &v) == NLSB_OK);
  CHECK(v == 4.0 + 64.0);
  nlsb_exponents e;
  REQUIRE(nlsb_spec_exponents(g.h, &e) == NLSB_OK);
  CHECK(e.alpha == 3.0);
  CHECK(e.beta == 6.0);
  CHECK(e.mu2 == 2.0);
  const char* label = nullptr;
  REQUIRE(nlsb_classify_case(g.h, 2, &label) == NLSB_OK);
  CHECK(std::string(label) == "iv-1");

  Spec critical("1*s^5");
  CHECK(nlsb_classify_case(critical.h, 3, &label) == NLSB_OUT_OF_SCOPE);
  nlsb_hypotheses h;
  REQUIRE(nlsb_check_hypotheses(critical.h, 3, &h) == NLSB_OK);
  CHECK(h.beta_subcritical == 0);
  nlsb_spec_free(nullptr);
}

TEST_CASE("shooting through the C interface") {
  Spec g("1*s^3");
  nlsb_profile* p = nullptr;
  CHECK(nlsb_shoot(g.h, 1, -1.0, nullptr, &p) == NLSB_DOMAIN);
  CHECK(std::string(nlsb_last_error()) == "no positive solutions exist for lambda <= 0");
  CHECK(p == nullptr);

  nlsb_controls bad;
  nlsb_controls_default(&bad);
  bad.cone_width = 0.0;
  CHECK(nlsb_shoot(g.h, 1, 1.0, &bad, &p) == NLSB_DOMAIN);

  REQUIRE(nlsb_shoot(g.h, 1, 1.0, nullptr, &p) == NLSB_OK);
  CHECK(nlsb_profile_amplitude(p) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(nlsb_profile_size(p) > 100);
  double r = 0, u = 0, du = 0;
  REQUIRE(nlsb_profile_node(p, 10, &r, &u, &du) == NLSB_OK);
  CHECK(u == doctest::Approx(std::sqrt(2.0) / std::cosh(r)).epsilon(1e-10));
  CHECK(nlsb_profile_node(p, nlsb_profile_size(p), &r, &u, &du) == NLSB_INVALID_ARGUMENT);
  double at = 0;
  REQUIRE(nlsb_profile_value_at(p, 3.0, &at) == NLSB_OK);
  CHECK(at == doctest::Approx(std::sqrt(2.0) / std::cosh(3.0)).epsilon(1e-9));
  nlsb_tail t;
  REQUIRE(nlsb_profile_tail(p, &t) == NLSB_OK);
  CHECK(t.power == 0.0);
  nlsb_branch_point b;
  REQUIRE(nlsb_profile_diagnostics(p, &b) == NLSB_OK);
  CHECK(b.mass == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(b.valid == 1);
  CHECK(nlsb_profile_warning(p, 1000) == nullptr);

  const auto dir = fresh_dir("shoot");
  CHECK(nlsb_write_profile_csv(p, (dir / "profile_shoot.csv").c_str()) == NLSB_OK);
  CHECK(nlsb_write_shoot_report(p, (dir / "report.json").c_str()) == NLSB_OK);
  CHECK(slurp(dir / "report.json").find("\"schema_version\": \"1.0\"") != std::string::npos);
  CHECK(nlsb_write_shoot_report(p, "/nonexistent-dir/a/report.json") == NLSB_IO);
  nlsb_profile_free(p);
}

TEST_CASE("ground states") {
  nlsb_ground_state* s = nullptr;
  CHECK(nlsb_ground_state_compute(3, 5.0, 1.0, nullptr, &s) == NLSB_DOMAIN);
  REQUIRE(nlsb_ground_state_compute(1, 3.0, 4.0, nullptr, &s) == NLSB_OK);
  CHECK(nlsb_ground_state_mass(s) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(nlsb_ground_state_central_value(s) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  const nlsb_profile* view = nlsb_ground_state_profile(s);
  CHECK(nlsb_profile_amplitude(view) == nlsb_ground_state_central_value(s));
  nlsb_ground_state_free(s);
}

TEST_CASE("curves, partial curves and extrema") {
  Spec g("1*s^2 + 1*s^5");
  nlsb_sweep_options o;
  nlsb_sweep_options_default(&o);
  o.lambda_min = 1e-2;
  o.lambda_max = 1e2;
  o.points_per_decade = 4;
  nlsb_curve* c = nullptr;
  REQUIRE(nlsb_sweep(g.h, 2, &o, &c) == NLSB_OK);
  CHECK(nlsb_curve_size(c) == 17);
  nlsb_branch_point b;
  REQUIRE(nlsb_curve_point(c, 0, &b) == NLSB_OK);
  CHECK(b.lambda == 1e-2);
  nlsb_exponent_fit fit;
  REQUIRE(nlsb_curve_exponents(c, &fit) == NLSB_OK);
  CHECK(fit.has_e0 == 1);
  CHECK(fit.theory_e0 == 1.0);
  nlsb_extremum ext;
  int found = 0;
  REQUIRE(nlsb_curve_extremum(c, &ext, &found) == NLSB_OK);
  CHECK(found == 1);
  CHECK(ext.maximum == 1);
  CHECK(ext.lambda == doctest::Approx(0.362).epsilon(1e-2));
  const auto dir = fresh_dir("curve");
  CHECK(nlsb_write_branch_csv(c, (dir / "branch.csv").c_str()) == NLSB_OK);
  CHECK(nlsb_write_branch_report(c, (dir / "report.json").c_str()) == NLSB_OK);
  nlsb_curve_free(c);

  o.controls.launch_scale = 0.5;
  c = nullptr;
  CHECK(nlsb_sweep(g.h, 2, &o, &c) == NLSB_SWEEP_DEGENERATE);
  REQUIRE(c != nullptr);
  REQUIRE(nlsb_curve_point(c, 3, &b) == NLSB_OK);
  CHECK(b.valid == 0);
  CHECK(nlsb_write_branch_report(c, (dir / "partial.json").c_str()) == NLSB_OK);
  nlsb_curve_free(c);
}

TEST_CASE("normalized solutions") {
  Spec g("1*s^3");
  nlsb_sweep_options o;
  nlsb_sweep_options_default(&o);
  o.lambda_min = 1e-2;
  o.lambda_max = 1e2;
  o.points_per_decade = 4;
  nlsb_case_report* r = nullptr;
  CHECK(nlsb_solve_normalized(g.h, 1, 0.0, &o, &r) == NLSB_DOMAIN);
  REQUIRE(nlsb_solve_normalized(g.h, 1, 8.0, &o, &r) == NLSB_OK);
  CHECK(std::string(nlsb_case_report_label(r)) == "i");
  REQUIRE(nlsb_case_report_root_count(r) == 1);
  nlsb_branch_point b;
  REQUIRE(nlsb_case_report_root(r, 0, &b) == NLSB_OK);
  CHECK(b.lambda == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(nlsb_case_report_prediction_met(r) == 1);
  const auto dir = fresh_dir("normalize");
  REQUIRE(nlsb_write_case_report(r, dir.c_str()) == NLSB_OK);
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(std::filesystem::exists(dir / "profile_root_0.csv"));
  CHECK_FALSE(std::filesystem::exists(dir / "profile_root_1.csv"));
  nlsb_case_report_free(r);
}
