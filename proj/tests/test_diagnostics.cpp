#include <doctest.h>

#include <cmath>

#include "nlsb/diagnostics.hpp"
#include "support.hpp"

using namespace nlsb;

TEST_CASE("sphere measure") {
  for (int n = 1; n <= 8; ++n) CHECK(sphere_measure(n) == doctest::Approx(testing::sphere_area(n)).epsilon(1e-14));
}

TEST_CASE("integrals of the one-dimensional cubic soliton") {
  const auto p = shoot_ground(NonlinearitySpec::parse("1*s^3"), 1, 1.0);
  // u = sqrt2 sech r: int u^2 = 4, int u'^2 = 4/3, int u^4/4 = 4/3, int u^4 = 16/3.
  CHECK(compute_mass(p) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(compute_kinetic(p) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(compute_potential(p) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(compute_nehari_integral(p) == doctest::Approx(16.0 / 3.0).epsilon(1e-12));
  CHECK(compute_action(p) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(compute_mass(p, false) < compute_mass(p));
  CHECK(compute_mass(p, false) > 4.0 * (1 - 1e-6));
}

TEST_CASE("mass in three dimensions agrees with direct quadrature of the profile") {
  const auto p = shoot_ground(NonlinearitySpec::parse("1*s^2 + 1*s^3"), 3, 2.0);
  const double direct =
      4.0 * M_PI *
      testing::simpson([&](double r) { return r * r * std::pow(p.value_at(r), 2); }, 0.0,
                       3.0 * p.match_radius(), 20000);
  CHECK(compute_mass(p) == doctest::Approx(direct).epsilon(1e-8));
}

TEST_CASE("identities hold on random ground states") {
  testing::Gen gen(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = gen.integer(1, 4);
    const double pmax = n <= 2 ? 8.0 : (n + 2.0) / (n - 2.0) - 0.2;
    const NonlinearitySpec spec({{gen.uniform(0.2, 3.0), gen.uniform(1.2, pmax)},
                                 {gen.uniform(0.2, 3.0), gen.uniform(1.2, pmax)}});
    const double lambda = gen.log_uniform(1e-2, 1e2);
    CAPTURE(spec.to_string());
    CAPTURE(n);
    CAPTURE(lambda);
    const auto b = evaluate_branch_point(shoot_ground(spec, n, lambda));
    CHECK(b.valid);
    CHECK(b.pohozaev_residual < 1e-7);
    CHECK(b.nehari_residual < 1e-7);
    CHECK(b.mp_gap < 1e-7);
    CHECK(within_gates(b));
    // Nehari: K + lambda rho = int g(u) u, computed here from the stored fields.
    CHECK(b.action == doctest::Approx(0.5 * (b.kinetic + lambda * b.mass) - b.potential).epsilon(1e-12));
  }
}

TEST_CASE("a profile without tail is refused") {
  auto p = shoot_ground(NonlinearitySpec::parse("1*s^3"), 2, 1.0);
  p.tail.reset();
  try {
    compute_mass(p);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingTail);
  }
  CHECK(compute_mass(p, false) > 0.0);
  CHECK_THROWS_AS(pohozaev_function(shoot_ground(NonlinearitySpec::parse("1*s^3"), 2, 1.0), 1.0), Error);
}

TEST_CASE("Pohozaev function along a trajectory is the integral of its derivative") {
  // P'(r) = r^{N-1} (N G(u) - (N-2)/2 u g(u) - lambda u^2).
  const auto spec = NonlinearitySpec::parse("1*s^3");
  for (int n : {1, 2, 3}) {
    const double lambda = 1.0;
    const auto traj = integrate_trajectory(spec, n, lambda, 0.8, 4.0, 1e-3);
    std::vector<double> integrand;
    for (const auto& s : traj.samples) {
      const double u = s.u;
      integrand.push_back(std::pow(s.r, n - 1) *
                          (n * std::pow(u, 4) / 4 - 0.5 * (n - 2) * std::pow(u, 4) - lambda * u * u));
    }
    const auto values = pohozaev_function_samples(traj);
    REQUIRE(values.size() == traj.samples.size());
    CHECK(values.front() == doctest::Approx(0.0).scale(1.0));
    for (std::size_t k : {1000u, 2000u, 4000u}) {
      double trap = 0.0;
      for (std::size_t i = 1; i <= k; ++i) trap += 0.5e-3 * (integrand[i] + integrand[i - 1]);
      CAPTURE(n);
      CAPTURE(k);
      CHECK(values[k] == doctest::Approx(trap).epsilon(1e-5).scale(1e-3));
      CHECK(pohozaev_function(traj, traj.samples[k].r) == doctest::Approx(values[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("the tail beyond 30 / sqrt(lambda) is negligible") {
  for (double lambda : {0.1, 1.0, 10.0}) {
    auto p = shoot_ground(NonlinearitySpec::parse("1*s^2 + 1*s^3"), 2, lambda);
    extend_tail_nodes(p, 30.0 / std::sqrt(lambda) + 0.1);
    REQUIRE(p.match_radius() >= 30.0 / std::sqrt(lambda));
    CAPTURE(lambda);
    CHECK(std::abs(compute_mass(p, false) / compute_mass(p) - 1.0) < 1e-8);
  }
}

TEST_CASE("doubling the nodes leaves the integrals unchanged") {
  const auto spec = NonlinearitySpec::parse("1*s^2 + 1*s^3");
  ShootingControls dense;
  dense.node_spacing /= 2;
  for (int n : {1, 2, 3}) {
    const auto a = shoot_ground(spec, n, 0.5);
    const auto b = shoot_ground(spec, n, 0.5, dense);
    REQUIRE(b.r.size() > a.r.size() * 3 / 2);
    CAPTURE(n);
    CHECK(std::abs(compute_mass(b) / compute_mass(a) - 1.0) < 1e-8);
    CHECK(std::abs(compute_kinetic(b) / compute_kinetic(a) - 1.0) < 1e-8);
    CHECK(std::abs(compute_potential(b) / compute_potential(a) - 1.0) < 1e-8);
  }
}
