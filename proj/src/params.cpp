#include "paradigm/params.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <string>

#include "paradigm/error.hpp"

namespace paradigm {

namespace {

void check(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

ModelParams::ModelParams(const RawParams& raw) : raw_(raw) {
  check(std::isfinite(raw.c1) && std::isfinite(raw.c2) && std::isfinite(raw.alpha) &&
            std::isfinite(raw.beta) && std::isfinite(raw.ell) && std::isfinite(raw.p),
        ErrorCode::NonFiniteParameter, "all parameters must be finite");
  check(raw.c1 > 0.0, ErrorCode::NonPositiveC1, "c1 must be > 0");
  check(raw.c2 > 0.0, ErrorCode::NonPositiveC2, "c2 must be > 0");
  check(raw.alpha < raw.beta, ErrorCode::AlphaNotBelowBeta, "alpha must be < beta");
  check(raw.beta <= 1.0, ErrorCode::BetaAboveOne, "beta must be <= 1");
  check(raw.ell >= 0.0, ErrorCode::NegativeFloor, "ell must be >= 0");
  check(raw.beta < 1.0 || raw.c2 < 1.0, ErrorCode::BetaOneRequiresC2LessThanOne,
        "beta = 1 requires c2 < 1");
  check(raw.beta == 1.0 || raw.ell > 0.0, ErrorCode::BetaBelowOneRequiresPositiveFloor,
        "beta < 1 requires ell > 0");
  check(raw.p > 0.0 && raw.p < 1.0, ErrorCode::POutOfRange, "p must lie in (0, 1)");
}

ModelParams ModelParams::with_p(double p) const {
  RawParams next = raw_;
  next.p = p;
  return ModelParams(next);
}

ModelParams validate(const RawParams& raw) { return ModelParams(raw); }

ScalingExponents ScalingExponents::from(double alpha, double beta) {
  check(alpha < beta, ErrorCode::AlphaNotBelowBeta, "alpha must be < beta");
  check(beta <= 1.0, ErrorCode::BetaAboveOne, "beta must be <= 1");
  const double gamma = 1.0 / (beta - alpha);
  // (1 - alpha) / (1 - alpha) can round away from 1.
  if (beta == 1.0) return {gamma, 1.0, 0.0};
  const double nu = (1.0 - alpha) * gamma;
  return {gamma, nu, (nu - 1.0) / 2.0};
}

ScalingExponents derive_exponents(const ModelParams& params) {
  return ScalingExponents::from(params.alpha(), params.beta());
}

std::array<double, 10> exponent_identity_residuals(const ScalingExponents& e, double alpha, double beta) {
  const double g = e.gamma, nu = e.nu, tau = e.tau;
  std::array<double, 10> out{};
  out[0] = -nu + g - g * alpha;
  out[1] = -nu + 1 + g - g * beta;
  out[2] = (-nu + 2 * g - 2 * tau - 2 * g * alpha) - 1;
  out[3] = -nu + 1 + 2 * g - 2 * tau - 2 * g * beta;
  for (int r = 2; r <= 4; ++r) {
    const auto k = static_cast<std::size_t>(r - 2);
    out[4 + k] = (-nu + 1 + r * g - r * tau - r * g * beta) - tau * (r - 2);
    out[7 + k] = (-nu + r * g - r * tau - r * g * alpha) - (r - 1 + tau * (r - 2));
  }
  return out;
}

double equilibrium(const ModelParams& params, double at_p) {
  check(at_p >= 0.0 && at_p < 1.0, ErrorCode::InvalidArgument, "at_p must lie in [0, 1)");
  const double gamma = derive_exponents(params).gamma;
  return std::pow(params.c1() * (1.0 - at_p) / params.c2(), gamma);
}

OuCoefficients OuCoefficients::make(double mu, double sigma) {
  check(std::isfinite(mu) && mu > 0.0, ErrorCode::InvalidArgument, "mu must be > 0");
  check(std::isfinite(sigma) && sigma >= 0.0, ErrorCode::InvalidArgument, "sigma must be >= 0");
  return {mu, sigma, sigma * sigma / (2.0 * mu)};
}

double ou_mu_expanded(const ModelParams& params) {
  const double g = derive_exponents(params).gamma;
  const double ratio = params.c1() / params.c2();
  const double a = params.alpha(), b = params.beta();
  return params.c2() * b * std::pow(ratio, g * (b - 1.0)) - params.c1() * a * std::pow(ratio, g * (a - 1.0));
}

double ou_sigma_expanded(const ModelParams& params) {
  const double g = derive_exponents(params).gamma;
  return params.c2() * std::pow(params.c1() / params.c2(), g * params.beta());
}

long double ou_log_mu(const ModelParams& params) {
  const long double a = params.alpha(), b = params.beta();
  const long double span = b - a;
  return std::log(span) +
         (-(1.0L - b) * std::log(static_cast<long double>(params.c1())) +
          (1.0L - a) * std::log(static_cast<long double>(params.c2()))) /
             span;
}

long double ou_log_mu_expanded(const ModelParams& params) {
  const long double a = params.alpha(), b = params.beta();
  const long double c1 = params.c1(), c2 = params.c2();
  const long double g = 1.0L / (b - a);
  const long double log_ratio = std::log(c1) - std::log(c2);
  // mu = s1 e^{l1} - s2 e^{l2}; a zero coefficient drops its term.
  struct Term {
    long double sign;
    long double log_abs;
  };
  std::array<Term, 2> terms{};
  std::size_t n = 0;
  if (b != 0.0L) terms[n++] = {b > 0 ? 1.0L : -1.0L, std::log(c2 * std::abs(b)) + g * (b - 1.0L) * log_ratio};
  if (a != 0.0L) terms[n++] = {a > 0 ? -1.0L : 1.0L, std::log(c1 * std::abs(a)) + g * (a - 1.0L) * log_ratio};
  long double top = terms[0].log_abs;
  for (std::size_t i = 1; i < n; ++i) top = std::max(top, terms[i].log_abs);
  long double scaled = 0.0L;
  for (std::size_t i = 0; i < n; ++i) scaled += terms[i].sign * std::exp(terms[i].log_abs - top);
  if (!(scaled > 0.0L)) return std::numeric_limits<long double>::quiet_NaN();
  return top + std::log(scaled);
}

OuCoefficients ou_coefficients(const ModelParams& params) {
  check(!params.beta_is_one(), ErrorCode::BetaMustBeBelowOne,
        "the Ornstein-Uhlenbeck limit needs beta < 1");
  const double a = params.alpha(), b = params.beta();
  const double c1 = params.c1(), c2 = params.c2();
  const double span = b - a;

  const double mu = span * std::pow(c1, -(1.0 - b) / span) * std::pow(c2, (1.0 - a) / span);
  const double sigma = std::pow(c1, b / span) * std::pow(c2, -a / span);
  check(std::isfinite(mu) && mu > 0.0 && std::isfinite(sigma) && sigma > 0.0, ErrorCode::CoefficientOutOfRange,
        "mu or sigma is outside the double range for these parameters");

  // The unsimplified form of mu is a difference of terms that can overflow
  // even when mu does not, so the comparison runs on logarithms.
  const long double log_gap = std::abs(std::log(static_cast<long double>(mu)) - ou_log_mu_expanded(params));
  check(log_gap <= 1e-10L, ErrorCode::Internal,
        "closed forms of mu disagree: log gap " + std::to_string(static_cast<double>(log_gap)));
  check(relative_gap(sigma, ou_sigma_expanded(params)) <= 1e-10, ErrorCode::Internal,
        "closed forms of sigma disagree");
  return OuCoefficients::make(mu, sigma);
}

}  // namespace paradigm
