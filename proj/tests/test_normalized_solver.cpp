#include <doctest.h>

#include <cmath>
#include <string>

#include "nlsb/ground_states.hpp"
#include "nlsb/normalized_solver.hpp"
#include "support.hpp"

using namespace nlsb;

namespace {

// Reference classifier, written from the case table directly.
std::string reference_case(double alpha, double beta, double c) {
  const auto eq = [&](double x) { return std::abs(x - c) <= 1e-12 * c; };
  if (eq(alpha) && eq(beta)) return "ii";
  if (eq(beta)) return alpha < c ? "iii-1" : "v-2";
  if (eq(alpha)) return beta < c ? "iii-2" : "v-1";
  if (alpha < c && beta < c) return "i";
  if (alpha > c && beta > c) return "vi";
  return alpha < c ? "iv-1" : "iv-2";
}

NormalizedOptions quick(double lo = 1e-3, double hi = 1e3, int ppd = 6) {
  NormalizedOptions o;
  o.sweep.lambda_min = lo;
  o.sweep.lambda_max = hi;
  o.sweep.points_per_decade = ppd;
  return o;
}

}  // namespace

TEST_CASE("case classification agrees with the reference table") {
  testing::Gen gen(71);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = gen.integer(1, 4);
    const double c = 2.0 + 4.0 / n;
    const double top = n <= 2 ? 12.0 : 2.0 * n / (n - 2.0) - 1e-3;
    const auto pick = [&] { return gen.integer(0, 3) == 0 ? c : gen.uniform(2.05, top); };
    double a = pick(), b = pick();
    if (a > b) std::swap(a, b);
    const NonlinearitySpec spec =
        a == b ? NonlinearitySpec({{1.0, a - 1.0}}) : NonlinearitySpec({{1.0, a - 1.0}, {2.0, b - 1.0}});
    CAPTURE(spec.to_string());
    CAPTURE(n);
    CHECK(std::string(to_string(classify_case(spec, n))) == reference_case(a, b, c));
  }
  // The mirrored cases need declared asymptotics.
  const NonlinearitySpec mirrored({{1.0, 2.0}}, AsymptoticData{5.0, 1.0, 3.0, 1.0});
  CHECK(classify_case(mirrored, 2) == CaseLabel::IV_2);
  CHECK(is_experimental(CaseLabel::IV_2));
  CHECK_FALSE(is_experimental(CaseLabel::IV_1));
}

TEST_CASE("Sobolev-critical exponents are out of scope") {
  try {
    classify_case(NonlinearitySpec::parse("1*s^5"), 3);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfScope);
  }
  CHECK_THROWS_AS(classify_case(NonlinearitySpec::parse("1*s^2 + 1*s^7"), 3), Error);
}

TEST_CASE("predictions follow the thresholds") {
  CaseThresholds t;
  t.critical_low = 2.0;
  t.critical_high = 5.0;
  CHECK(predict_for_mass(CaseLabel::I, t, 1.0).guaranteed_roots == 1);
  CHECK(predict_for_mass(CaseLabel::VI, t, 1.0).guaranteed_roots == 1);
  CHECK(predict_for_mass(CaseLabel::II, t, 1.0).kind == PredictionKind::NoSolutionForSmallA);
  CHECK(predict_for_mass(CaseLabel::II, t, 6.0).kind == PredictionKind::NoSolutionForLargeA);
  CHECK(predict_for_mass(CaseLabel::II, t, 3.0).kind == PredictionKind::ExistsAtLeast);
  CHECK(predict_for_mass(CaseLabel::II, t, 3.0).guaranteed_roots == 1);
  MassExtremum peak;
  peak.mass = 7.0;
  peak.maximum = true;
  t.extremum = peak;
  CHECK(predict_for_mass(CaseLabel::IV_1, t, 3.0).guaranteed_roots == 2);
  CHECK(predict_for_mass(CaseLabel::IV_1, t, 8.0).guaranteed_roots == 0);
  CHECK(predict_for_mass(CaseLabel::IV_1, t, 8.0).kind == PredictionKind::NoSolutionForLargeA);
}

TEST_CASE("cubic on the line: rho = 4 sqrt(lambda) inverts in closed form") {
  testing::Gen gen(72);
  for (int trial = 0; trial < 3; ++trial) {
    const double a = gen.log_uniform(0.5, 20.0);
    const auto r = solve_normalized(NonlinearitySpec::parse("1*s^3"), 1, a, quick());
    CAPTURE(a);
    CHECK(r.label == CaseLabel::I);
    REQUIRE(r.roots.size() == 1);
    CHECK(r.roots[0].lambda == doctest::Approx(a * a / 16.0).epsilon(1e-6));
    CHECK(std::abs(r.roots[0].point.mass - a) <= 1e-7 * a);
    CHECK(r.prediction_met);
  }
}

TEST_CASE("grid extension reaches roots outside the initial range") {
  // a = 400 needs lambda = 1e4, one decade past lambda_max.
  const auto r = solve_normalized(NonlinearitySpec::parse("1*s^3"), 1, 400.0, quick(1e-2, 1e3, 4));
  REQUIRE(r.roots.size() == 1);
  CHECK(r.roots[0].lambda == doctest::Approx(1e4).epsilon(1e-6));
}

TEST_CASE("mass-critical quintic on the line") {
  const double threshold = std::sqrt(3.0) * M_PI / 2.0;
  const auto spec = NonlinearitySpec::parse("1*s^5");
  const auto below = solve_normalized(spec, 1, 0.5 * threshold, quick(1e-1, 1e1, 4));
  CHECK(below.label == CaseLabel::II);
  CHECK(below.roots.empty());
  REQUIRE(below.thresholds.critical_low.has_value());
  CHECK(*below.thresholds.critical_low == doctest::Approx(threshold).epsilon(1e-9));
  CHECK(below.prediction_met);
  const auto above = solve_normalized(spec, 1, 2.0 * threshold, quick(1e-1, 1e1, 4));
  CHECK(above.roots.empty());
}

TEST_CASE("mixed model has two roots below the maximum") {
  const auto spec = NonlinearitySpec::parse("1*s^2 + 1*s^5");
  const auto r = solve_normalized(spec, 2, 3.0, quick(1e-3, 1e3, 8));
  CHECK(r.label == CaseLabel::IV_1);
  REQUIRE(r.thresholds.extremum.has_value());
  REQUIRE(r.roots.size() == 2);
  CHECK(r.roots[0].lambda < r.thresholds.extremum->lambda);
  CHECK(r.roots[1].lambda > r.thresholds.extremum->lambda);
  for (const auto& root : r.roots) {
    CHECK(std::abs(root.point.mass - 3.0) <= 1e-7 * 3.0);
    CHECK(root.profile.lambda == root.lambda);
  }
  CHECK(r.prediction_met);
}

TEST_CASE("non-positive mass is a domain error") {
  for (double a : {0.0, -2.0}) {
    try {
      solve_normalized(NonlinearitySpec::parse("1*s^3"), 1, a);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Domain);
    }
  }
}
