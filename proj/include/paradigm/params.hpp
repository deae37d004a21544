#pragma once

#include <array>

namespace paradigm {

/// Unvalidated parameter tuple, as read from a config file or typed by hand.
struct RawParams {
  double c1 = 1.0;     // increment coefficient
  double c2 = 0.5;     // decrement coefficient
  double alpha = -1.0; // increment exponent
  double beta = 1.0;   // decrement exponent
  double ell = 0.0;    // window floor
  double p = 0.01;     // per-packet loss probability

  bool operator==(const RawParams&) const = default;
};

/// Increment/decrement model W -> (W + c1 W^alpha) or (W - c2 W^beta), floored at ell.
///
/// Instances only exist in a valid state: construction checks
///   c1 > 0, c2 > 0, alpha < beta <= 1, ell >= 0, 0 < p < 1,
///   beta == 1 implies c2 < 1, beta < 1 implies ell > 0,
/// and throws paradigm::Error with a distinct code per violated assumption.
class ModelParams {
 public:
  explicit ModelParams(const RawParams& raw);

  double c1() const noexcept { return raw_.c1; }
  double c2() const noexcept { return raw_.c2; }
  double alpha() const noexcept { return raw_.alpha; }
  double beta() const noexcept { return raw_.beta; }
  double ell() const noexcept { return raw_.ell; }
  double p() const noexcept { return raw_.p; }
  const RawParams& raw() const noexcept { return raw_; }

  bool beta_is_one() const noexcept { return raw_.beta == 1.0; }

  /// Same model at a different loss probability.
  ModelParams with_p(double p) const;

 private:
  RawParams raw_;
};

/// Returns the params unchanged when every standing assumption holds.
ModelParams validate(const RawParams& raw);

/// Space scale p^gamma, time scale p^-nu, fluctuation scale p^tau.
struct ScalingExponents {
  double gamma;
  double nu;
  double tau;

  /// Requires alpha < beta <= 1.
  static ScalingExponents from(double alpha, double beta);
};

ScalingExponents derive_exponents(const ModelParams& params);

/// Residuals (lhs - rhs) of the ten exponent identities
///   -nu + gamma - gamma*alpha = 0
///   -nu + 1 + gamma - gamma*beta = 0
///   -nu + 2gamma - 2tau - 2gamma*alpha = 1
///   -nu + 1 + 2gamma - 2tau - 2gamma*beta = 0
///   -nu + 1 + r*gamma - r*tau - r*gamma*beta = tau(r-2)           r = 2,3,4
///   -nu + r*gamma - r*tau - r*gamma*alpha = r - 1 + tau(r-2)      r = 2,3,4
std::array<double, 10> exponent_identity_residuals(const ScalingExponents& e, double alpha, double beta);

/// c_q = (c1 (1 - q) / c2)^gamma, the fixed point of the perturbed fluid ODE.
/// q = 0 gives the limiting equilibrium c0. Requires q in [0, 1).
double equilibrium(const ModelParams& params, double at_p);

struct OuCoefficients {
  double mu;
  double sigma;
  double stationary_variance;  // sigma^2 / (2 mu)

  /// mu > 0, sigma >= 0.
  static OuCoefficients make(double mu, double sigma);
};

/// Drift and diffusion of the Ornstein-Uhlenbeck limit of the fluctuations
/// around equilibrium. Only defined for beta < 1 (BetaMustBeBelowOne otherwise).
/// Both closed forms of mu and sigma are evaluated and must agree to 1e-10
/// relative. CoefficientOutOfRange when mu or sigma is not a finite positive double.
OuCoefficients ou_coefficients(const ModelParams& params);

/// log mu from each form, in extended precision and without forming the
/// powers themselves, so both stay finite when gamma is large and mu or the
/// individual terms of the unsimplified form leave the double range.
long double ou_log_mu(const ModelParams& params);
long double ou_log_mu_expanded(const ModelParams& params);

/// The unsimplified forms, exposed for cross-checking:
///   mu    = c2 beta (c1/c2)^{gamma(beta-1)} - c1 alpha (c1/c2)^{gamma(alpha-1)}
///   sigma = c2 (c1/c2)^{gamma beta}
double ou_mu_expanded(const ModelParams& params);
double ou_sigma_expanded(const ModelParams& params);

}  // namespace paradigm
