#include "nlsb/ground_states.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>

#include "format.hpp"
#include "nlsb/diagnostics.hpp"

namespace nlsb {

namespace {

void require_kwong_range(int dimension, double exponent, double coefficient) {
  if (dimension < 1) throw Error(ErrorCode::Domain, "dimension must be at least 1");
  if (!(coefficient > 0.0) || !std::isfinite(coefficient)) {
    throw Error(ErrorCode::Domain, "coefficient must be positive");
  }
  if (!(exponent > 1.0) || !(exponent + 1.0 < sobolev_exponent(dimension))) {
    throw Error(ErrorCode::Domain, "exponent " + format_shortest(exponent) +
                                       " outside the subcritical range for N = " +
                                       std::to_string(dimension));
  }
}

struct Cache {
  std::shared_mutex mutex;
  std::map<std::string, std::shared_ptr<const GroundState>> states;
};

Cache& cache() {
  static Cache instance;
  return instance;
}

}  // namespace

GroundState kwong_ground_state(int dimension, double exponent, double coefficient,
                               const ShootingControls& controls) {
  require_kwong_range(dimension, exponent, coefficient);
  controls.validate();
  const std::string key = std::to_string(dimension) + '|' + format_double(exponent) + '|' +
                          format_double(coefficient) + '|' + controls.fingerprint();
  auto& c = cache();
  {
    std::shared_lock lock(c.mutex);
    if (auto it = c.states.find(key); it != c.states.end()) return *it->second;
  }
  const NonlinearitySpec spec({{coefficient, exponent}});
  RadialProfile profile = shoot_ground(spec, dimension, 1.0, controls);
  const double mass = compute_mass(profile);
  const double u0 = profile.u.front();
  auto state = std::make_shared<const GroundState>(
      GroundState{dimension, exponent, coefficient, std::move(profile), mass, u0});
  std::unique_lock lock(c.mutex);
  // a concurrent writer may have won; keep the first entry
  auto [it, inserted] = c.states.emplace(key, std::move(state));
  return *it->second;
}

GroundState scale_by_mu(const GroundState& base, double coefficient) {
  if (base.coefficient != 1.0) {
    throw Error(ErrorCode::Domain, "scale_by_mu expects a base state with mu = 1");
  }
  require_kwong_range(base.dimension, base.exponent, coefficient);
  const double factor = std::pow(coefficient, 1.0 / (1.0 - base.exponent));
  GroundState out = base;
  out.coefficient = coefficient;
  out.profile.spec = NonlinearitySpec({{coefficient, base.exponent}});
  out.profile.xi *= factor;
  for (auto& v : out.profile.u) v *= factor;
  for (auto& v : out.profile.du) v *= factor;
  if (out.profile.tail) out.profile.tail->amplitude *= factor;
  out.mass = base.mass * factor * factor;
  out.central_value = base.central_value * factor;
  return out;
}

double pure_power_mass_factor(int dimension, double exponent, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::Domain, "lambda must be positive");
  if (!(exponent > 1.0)) throw Error(ErrorCode::Domain, "exponent must exceed 1");
  const double pm1 = exponent - 1.0;
  return std::pow(lambda, (4.0 - pm1 * dimension) / (2.0 * pm1));
}

double critical_mass_threshold(int dimension, double coefficient,
                               const ShootingControls& controls) {
  if (!(coefficient > 0.0)) throw Error(ErrorCode::Domain, "coefficient must be positive");
  const auto base = kwong_ground_state(dimension, 1.0 + 4.0 / dimension, 1.0, controls);
  return std::pow(coefficient, -0.5 * dimension) * base.mass;
}

std::vector<double> uniqueness_probe(int dimension, double exponent, double coefficient,
                                     int points, const ShootingControls& controls) {
  require_kwong_range(dimension, exponent, coefficient);
  const NonlinearitySpec spec({{coefficient, exponent}});
  const double s0 = first_positive_root_F(spec, 1.0);
  return scan_decay_amplitudes(spec, dimension, 1.0, 0.99 * s0, 1000.0 * s0, points, controls);
}

std::size_t ground_state_cache_size() {
  auto& c = cache();
  std::shared_lock lock(c.mutex);
  return c.states.size();
}

void clear_ground_state_cache() {
  auto& c = cache();
  std::unique_lock lock(c.mutex);
  c.states.clear();
}

}  // namespace nlsb
