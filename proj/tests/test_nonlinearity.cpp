#include <doctest.h>

#include <cmath>
#include <string>

#include "nlsb/error.hpp"
#include "nlsb/nonlinearity.hpp"
#include "support.hpp"

using namespace nlsb;

TEST_CASE("parse accepts the documented grammar") {
  const auto g = NonlinearitySpec::parse("g = 2*s^3 + 0.5*s^2");
  REQUIRE(g.terms().size() == 2);
  CHECK(g.terms()[0].exponent == 2.0);
  CHECK(g.terms()[0].coefficient == 0.5);
  CHECK(g.terms()[1].exponent == 3.0);
  CHECK(g.to_string() == "g = 0.5*s^2 + 2*s^3");
  CHECK(NonlinearitySpec::parse("1*s^3 + 1*s^3").terms()[0].coefficient == 2.0);
}

TEST_CASE("malformed specs are rejected") {
  for (const char* bad : {"", "s^3", "1*s^", "1*s^1", "1*s^0.5", "-1*s^3", "0*s^3", "1*x^3",
                          "1*s^3 +", "1*s^3 1*s^4", "nan*s^3", "1*s^inf"}) {
    CAPTURE(bad);
    try {
      NonlinearitySpec::parse(bad);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidSpec);
    }
  }
}

TEST_CASE("to_string round-trips random specs exactly") {
  testing::Gen gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PowerTerm> terms;
    const int n = gen.integer(1, 4);
    for (int i = 0; i < n; ++i) terms.push_back({gen.log_uniform(1e-3, 1e3), gen.uniform(1.01, 9.0)});
    const NonlinearitySpec spec(terms);
    CHECK(NonlinearitySpec::parse(spec.to_string()) == spec);
  }
}

TEST_CASE("g, g' and G agree with direct sums and quadrature") {
  testing::Gen gen(12);
  for (int trial = 0; trial < 50; ++trial) {
    const double p1 = gen.uniform(1.1, 3.0), p2 = gen.uniform(3.0, 6.0);
    const double m1 = gen.uniform(0.1, 3.0), m2 = gen.uniform(0.1, 3.0);
    const NonlinearitySpec spec({{m1, p1}, {m2, p2}});
    const double s = gen.log_uniform(1e-3, 10.0);
    const double direct = m1 * std::pow(s, p1) + m2 * std::pow(s, p2);
    CHECK(eval_g(spec, s) == doctest::Approx(direct).epsilon(1e-14));
    const double dg = m1 * p1 * std::pow(s, p1 - 1) + m2 * p2 * std::pow(s, p2 - 1);
    CHECK(eval_g_prime(spec, s) == doctest::Approx(dg).epsilon(1e-14));
    const double G = testing::adaptive_simpson([&](double t) { return m1 * std::pow(t, p1) + m2 * std::pow(t, p2); },
                                               0.0, s, 1e-13 * (1 + direct * s));
    CHECK(eval_G(spec, s) == doctest::Approx(G).epsilon(1e-9));
  }
  const auto cubic = NonlinearitySpec::parse("1*s^3");
  CHECK(eval_g(cubic, -1.0) == 0.0);
  CHECK(eval_G(cubic, 0.0) == 0.0);
  CHECK_THROWS_AS(eval_g(cubic, NAN), Error);
}

TEST_CASE("asymptotic exponents read off the extreme terms") {
  const auto e = asymptotic_exponents(NonlinearitySpec::parse("3*s^2 + 1*s^4 + 5*s^5"));
  CHECK(e.alpha == 3.0);
  CHECK(e.mu1 == 3.0);
  CHECK(e.beta == 6.0);
  CHECK(e.mu2 == 5.0);
  const NonlinearitySpec swapped({{1.0, 2.0}}, AsymptoticData{4.0, 1.0, 3.0, 1.0});
  CHECK(asymptotic_exponents(swapped).alpha == 4.0);
}

TEST_CASE("Sobolev exponent") {
  CHECK(std::isinf(sobolev_exponent(1)));
  CHECK(std::isinf(sobolev_exponent(2)));
  CHECK(sobolev_exponent(3) == 6.0);
  CHECK(sobolev_exponent(4) == 4.0);
  CHECK(sobolev_exponent(5) == doctest::Approx(10.0 / 3.0));
}

TEST_CASE("hypothesis report") {
  const auto ok = check_hypotheses(NonlinearitySpec::parse("1*s^2 + 1*s^3"), 3);
  CHECK(ok.g1_ok);
  CHECK(ok.g2_ok);
  CHECK(ok.alpha_subcritical);
  CHECK(ok.beta_subcritical);
  CHECK(ok.g3_status != G3Status::Unverified);

  const auto critical = check_hypotheses(NonlinearitySpec::parse("1*s^5"), 3);
  CHECK_FALSE(critical.beta_subcritical);
  CHECK_FALSE(critical.g2_ok);

  CHECK(check_hypotheses(NonlinearitySpec::parse("1*s^9"), 2).g2_ok);
  CHECK(check_hypotheses(NonlinearitySpec::parse("1*s^3"), 1).g3_status == G3Status::ProvedByDimension);
  CHECK_THROWS_AS(check_hypotheses(NonlinearitySpec::parse("1*s^3"), 0), Error);
}

TEST_CASE("g behaves like its extreme terms at the ends") {
  testing::Gen gen(13);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<PowerTerm> terms;
    const int n = gen.integer(1, 4);
    for (int i = 0; i < n; ++i) terms.push_back({gen.uniform(0.1, 5.0), gen.uniform(1.1, 6.0)});
    const NonlinearitySpec spec(terms);
    const auto e = asymptotic_exponents(spec);
    // Exponents closer than this are not resolved at s = 1e-8, 1e8.
    bool separated = true;
    for (const auto& t : spec.terms()) {
      const double gap_lo = t.exponent - (e.alpha - 1), gap_hi = (e.beta - 1) - t.exponent;
      if ((gap_lo > 0 && gap_lo < 0.6) || (gap_hi > 0 && gap_hi < 0.6)) separated = false;
    }
    if (!separated) continue;
    CHECK(eval_g(spec, 1e-8) / std::pow(1e-8, e.alpha - 1) == doctest::Approx(e.mu1).epsilon(1e-4));
    CHECK(eval_g(spec, 1e8) / std::pow(1e8, e.beta - 1) == doctest::Approx(e.mu2).epsilon(1e-4));
  }
}
