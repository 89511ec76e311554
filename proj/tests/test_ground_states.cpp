#include <doctest.h>

#include <cmath>

#include "nlsb/diagnostics.hpp"
#include "nlsb/ground_states.hpp"
#include "support.hpp"

using namespace nlsb;

TEST_CASE("quintic ground state on the line has a closed form") {
  const auto s = kwong_ground_state(1, 5.0, 1.0);
  CHECK(s.central_value == doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-12));
  double worst = 0.0;
  for (std::size_t i = 0; i < s.profile.r.size(); ++i) {
    worst = std::max(worst, std::abs(s.profile.u[i] - testing::quintic_soliton(s.profile.r[i])));
  }
  CHECK(worst < 1e-9);
  const double exact = std::sqrt(3.0) * M_PI / 2.0;
  CHECK(s.mass == doctest::Approx(exact).epsilon(1e-10));
  CHECK(critical_mass_threshold(1, 4.0) == doctest::Approx(exact / 2.0).epsilon(1e-10));
}

TEST_CASE("coefficient scaling matches a direct shoot") {
  testing::Gen gen(51);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = gen.integer(1, 3);
    const double p = gen.uniform(1.5, n == 3 ? 4.5 : 6.0);
    const double mu = gen.log_uniform(0.1, 10.0);
    const auto base = kwong_ground_state(n, p, 1.0);
    const auto scaled = scale_by_mu(base, mu);
    const auto direct = kwong_ground_state(n, p, mu);
    const double factor = std::pow(mu, 1.0 / (1.0 - p));
    CAPTURE(n);
    CAPTURE(p);
    CAPTURE(mu);
    CHECK(scaled.central_value == doctest::Approx(factor * base.central_value).epsilon(1e-14));
    CHECK(scaled.mass == doctest::Approx(factor * factor * base.mass).epsilon(1e-13));
    CHECK(direct.central_value == doctest::Approx(scaled.central_value).epsilon(1e-10));
    CHECK(direct.mass == doctest::Approx(scaled.mass).epsilon(1e-8));
  }
  CHECK_THROWS_AS(scale_by_mu(kwong_ground_state(1, 3.0, 2.0), 3.0), Error);
}

TEST_CASE("pure-power mass factor") {
  testing::Gen gen(52);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = gen.integer(1, 3);
    const double p = gen.uniform(1.5, n == 3 ? 4.5 : 6.0);
    const double lambda = gen.log_uniform(0.1, 10.0);
    const NonlinearitySpec spec({{1.0, p}});
    const double ratio = compute_mass(shoot_ground(spec, n, lambda)) / compute_mass(shoot_ground(spec, n, 1.0));
    const double expected = std::pow(lambda, (4.0 - (p - 1.0) * n) / (2.0 * (p - 1.0)));
    CHECK(pure_power_mass_factor(n, p, lambda) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(ratio == doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("ground states are unique in the scanned range") {
  for (auto [n, p] : {std::pair{1, 3.0}, std::pair{2, 3.0}, std::pair{3, 2.0}, std::pair{3, 4.0}}) {
    CAPTURE(n);
    CAPTURE(p);
    const auto found = uniqueness_probe(n, p, 1.0, 120);
    REQUIRE(found.size() == 1);
    CHECK(found[0] == doctest::Approx(kwong_ground_state(n, p, 1.0).central_value).epsilon(1e-9));
  }
}

TEST_CASE("ground-state domain") {
  for (auto [n, p, mu] : {std::tuple{3, 5.0, 1.0}, std::tuple{3, 6.0, 1.0}, std::tuple{1, 1.0, 1.0},
                          std::tuple{1, 3.0, 0.0}, std::tuple{0, 3.0, 1.0}}) {
    try {
      kwong_ground_state(n, p, mu);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Domain);
    }
  }
}

TEST_CASE("ground states are memoized") {
  clear_ground_state_cache();
  CHECK(ground_state_cache_size() == 0);
  const auto a = kwong_ground_state(2, 3.0, 1.0);
  CHECK(ground_state_cache_size() == 1);
  const auto b = kwong_ground_state(2, 3.0, 1.0);
  CHECK(ground_state_cache_size() == 1);
  CHECK(a.profile.u == b.profile.u);
  ShootingControls tight;
  tight.step_tolerance = 1e-12;
  kwong_ground_state(2, 3.0, 1.0, tight);
  CHECK(ground_state_cache_size() == 2);
}
