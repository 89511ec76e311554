#include "nlsb/nonlinearity.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "nlsb/error.hpp"
#include "format.hpp"

namespace nlsb {

NonlinearitySpec::NonlinearitySpec(std::vector<PowerTerm> terms,
                                   std::optional<AsymptoticData> overrides)
    : overrides_(overrides) {
  if (terms.empty()) {
    throw Error(ErrorCode::InvalidSpec, "nonlinearity needs at least one term");
  }
  for (const auto& t : terms) {
    if (!std::isfinite(t.coefficient) || t.coefficient <= 0.0) {
      throw Error(ErrorCode::InvalidSpec,
                  "coefficient must be positive, got " + format_double(t.coefficient));
    }
    if (!std::isfinite(t.exponent) || t.exponent <= 1.0) {
      throw Error(ErrorCode::InvalidSpec,
                  "exponent must exceed 1, got " + format_double(t.exponent));
    }
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const PowerTerm& a, const PowerTerm& b) { return a.exponent < b.exponent; });
  for (const auto& t : terms) {
    if (!terms_.empty() && terms_.back().exponent == t.exponent) {
      terms_.back().coefficient += t.coefficient;
    } else {
      terms_.push_back(t);
    }
  }
  if (overrides_) {
    const auto& o = *overrides_;
    if (!(o.alpha > 2.0 && o.beta > 2.0 && o.mu1 > 0.0 && o.mu2 > 0.0)) {
      throw Error(ErrorCode::InvalidSpec, "declared overrides need alpha, beta > 2 and mu > 0");
    }
  }
}

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool done() {
    skip_space();
    return pos_ >= text_.size();
  }
  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }
  double number() {
    skip_space();
    double value = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    if (pos_ < text_.size() && text_[pos_] == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) fail("expected a number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return value;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::InvalidSpec, "malformed nonlinearity '" + std::string(text_) +
                                            "' at column " + std::to_string(pos_ + 1) + ": " + what);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

NonlinearitySpec NonlinearitySpec::parse(std::string_view text) {
  Cursor cur(text);
  // optional "g =" prefix
  {
    Cursor probe(text);
    if (probe.accept("g") && probe.accept("=")) {
      cur.expect("g");
      cur.expect("=");
    }
  }
  std::vector<PowerTerm> terms;
  do {
    PowerTerm t{};
    t.coefficient = cur.number();
    cur.expect("*");
    cur.expect("s");
    cur.expect("^");
    t.exponent = cur.number();
    terms.push_back(t);
  } while (cur.accept("+"));
  if (!cur.done()) cur.fail("unexpected trailing text");
  return NonlinearitySpec(std::move(terms));
}

std::string NonlinearitySpec::to_string() const {
  std::string out = "g = ";
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0) out += " + ";
    out += format_shortest(terms_[i].coefficient);
    out += "*s^";
    out += format_shortest(terms_[i].exponent);
  }
  return out;
}

double eval_g(const NonlinearitySpec& spec, double s) {
  if (!std::isfinite(s)) throw Error(ErrorCode::Domain, "g evaluated at a non-finite argument");
  if (s <= 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& t : spec.terms()) sum += t.coefficient * std::pow(s, t.exponent);
  return sum;
}

double eval_g_prime(const NonlinearitySpec& spec, double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw Error(ErrorCode::Domain, "g' needs a finite s >= 0, got " + format_double(s));
  }
  if (s == 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& t : spec.terms()) {
    sum += t.coefficient * t.exponent * std::pow(s, t.exponent - 1.0);
  }
  return sum;
}

double eval_G(const NonlinearitySpec& spec, double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw Error(ErrorCode::Domain, "G needs a finite s >= 0, got " + format_double(s));
  }
  double sum = 0.0;
  for (const auto& t : spec.terms()) {
    sum += t.coefficient * std::pow(s, t.exponent + 1.0) / (t.exponent + 1.0);
  }
  return sum;
}

AsymptoticData asymptotic_exponents(const NonlinearitySpec& spec) {
  if (spec.overrides()) return *spec.overrides();
  const auto terms = spec.terms();
  return {1.0 + terms.front().exponent, terms.front().coefficient, 1.0 + terms.back().exponent,
          terms.back().coefficient};
}

double sobolev_exponent(int dimension) {
  if (dimension < 1) throw Error(ErrorCode::Domain, "dimension must be >= 1");
  if (dimension <= 2) return std::numeric_limits<double>::infinity();
  return 2.0 * dimension / (dimension - 2.0);
}

const char* to_string(G3Status status) {
  switch (status) {
    case G3Status::ProvedByDimension: return "proved-by-dimension";
    case G3Status::ProvedByExponent: return "proved-by-exponent";
    case G3Status::SampledSubcriticalQuotient: return "sampled-subcritical-quotient";
    case G3Status::Unverified: return "unverified";
  }
  return "unverified";
}

HypothesisReport check_hypotheses(const NonlinearitySpec& spec, int dimension, int samples) {
  if (dimension < 1) throw Error(ErrorCode::Domain, "dimension must be >= 1");
  HypothesisReport rep;
  rep.dimension = dimension;
  rep.exponents = asymptotic_exponents(spec);
  rep.sobolev_exponent = sobolev_exponent(dimension);
  rep.g1_ok = true;  // positive power sums are C^1 on [0, inf) and positive on (0, inf)
  rep.alpha_subcritical = rep.exponents.alpha < rep.sobolev_exponent;
  rep.beta_subcritical = rep.exponents.beta < rep.sobolev_exponent;
  rep.g2_ok = rep.exponents.alpha > 2.0 && rep.exponents.beta > 2.0 && rep.alpha_subcritical &&
              rep.beta_subcritical && rep.exponents.mu1 > 0.0 && rep.exponents.mu2 > 0.0;

  if (dimension <= 2) {
    rep.g3_status = G3Status::ProvedByDimension;
    return rep;
  }
  const double n = dimension;
  if (rep.exponents.alpha - 1.0 <= n / (n - 2.0)) {
    rep.g3_status = G3Status::ProvedByExponent;
    return rep;
  }
  const double crit = rep.sobolev_exponent;
  const double lo = std::log(1e-8);
  const double hi = std::log(1e8);
  bool holds = true;
  for (int i = 0; i < samples && holds; ++i) {
    const double s = std::exp(lo + (hi - lo) * i / std::max(1, samples - 1));
    const double lhs = s * eval_g(spec, s);
    const double rhs = crit * eval_G(spec, s);
    holds = lhs <= rhs * (1.0 + 1e-12);
  }
  rep.g3_status = holds ? G3Status::SampledSubcriticalQuotient : G3Status::Unverified;
  return rep;
}

}  // namespace nlsb
