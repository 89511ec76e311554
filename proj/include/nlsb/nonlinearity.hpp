#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nlsb {

/// One term mu * s^p of a power-sum nonlinearity.
struct PowerTerm {
  double coefficient;
  double exponent;
};

/// Behaviour of g at zero and infinity: g(s) ~ mu1 s^(alpha-1) as s -> 0+
/// and g(s) ~ mu2 s^(beta-1) as s -> +inf.
struct AsymptoticData {
  double alpha;
  double mu1;
  double beta;
  double mu2;
};

/// A nonlinearity g(s) = sum_i mu_i s^(p_i) with mu_i > 0 and p_i > 1,
/// extended by zero for s <= 0.
///
/// Terms are kept sorted by exponent with equal exponents merged, so two
/// specs describing the same function compare and serialize identically.
/// The optional overrides replace the asymptotic data read off the terms;
/// they exist for experimental models whose small-s exponent is the larger
/// one, which no power sum can realize.
class NonlinearitySpec {
 public:
  explicit NonlinearitySpec(std::vector<PowerTerm> terms,
                            std::optional<AsymptoticData> overrides = std::nullopt);

  /// Parses `coef*s^exponent (+ coef*s^exponent)*`, optionally prefixed by
  /// `g =`. Throws Error(InvalidSpec) on malformed text or invalid terms.
  static NonlinearitySpec parse(std::string_view text);

  /// Canonical text form, e.g. `g = 1*s^2 + 1*s^5`. Round-trips through parse().
  std::string to_string() const;

  std::span<const PowerTerm> terms() const { return terms_; }
  const std::optional<AsymptoticData>& overrides() const { return overrides_; }
  bool is_pure_power() const { return terms_.size() == 1; }

  friend bool operator==(const NonlinearitySpec&, const NonlinearitySpec&) = default;

 private:
  std::vector<PowerTerm> terms_;
  std::optional<AsymptoticData> overrides_;
};

inline bool operator==(const PowerTerm& a, const PowerTerm& b) {
  return a.coefficient == b.coefficient && a.exponent == b.exponent;
}
inline bool operator==(const AsymptoticData& a, const AsymptoticData& b) {
  return a.alpha == b.alpha && a.mu1 == b.mu1 && a.beta == b.beta && a.mu2 == b.mu2;
}

/// g(s); zero for s <= 0. Throws Error(Domain) for non-finite s.
double eval_g(const NonlinearitySpec& spec, double s);

/// g'(s) for s >= 0.
double eval_g_prime(const NonlinearitySpec& spec, double s);

/// G(s) = int_0^s g, closed form, s >= 0.
double eval_G(const NonlinearitySpec& spec, double s);

AsymptoticData asymptotic_exponents(const NonlinearitySpec& spec);

/// 2N/(N-2) for N >= 3, +inf for N = 1, 2.
double sobolev_exponent(int dimension);

enum class G3Status {
  ProvedByDimension,
  ProvedByExponent,
  SampledSubcriticalQuotient,
  Unverified,
};

const char* to_string(G3Status status);

struct HypothesisReport {
  int dimension = 0;
  bool g1_ok = false;
  bool g2_ok = false;
  AsymptoticData exponents{};
  G3Status g3_status = G3Status::Unverified;
  double sobolev_exponent = 0.0;
  bool alpha_subcritical = false;
  bool beta_subcritical = false;
};

/// Fills the hypothesis flags. For N >= 3 with alpha - 1 > N/(N-2) the
/// condition s g(s) <= 2* G(s) is sampled on `samples` log-spaced points of
/// [1e-8, 1e8]; a sample pass is reported as such, never as a proof.
HypothesisReport check_hypotheses(const NonlinearitySpec& spec, int dimension,
                                  int samples = 10000);

}  // namespace nlsb
