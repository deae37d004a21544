#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "paradigm/error.hpp"
#include "paradigm/params.hpp"

using namespace paradigm;

namespace {

RawParams tcp() { return {1.0, 0.5, -1.0, 1.0, 0.0, 0.01}; }

ErrorCode code_of(const RawParams& raw) {
  try {
    validate(raw);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a validation error");
  return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("validate accepts TCP and rejects each broken assumption") {
  const ModelParams ok = validate(tcp());
  CHECK(ok.raw() == tcp());

  CHECK(code_of({1, 1.5, 0, 1, 0, 0.01}) == ErrorCode::BetaOneRequiresC2LessThanOne);
  CHECK(code_of({1, 1, 0, 0.5, 0, 0.01}) == ErrorCode::BetaBelowOneRequiresPositiveFloor);
  CHECK(code_of({1, 0.5, 1, 1, 0, 0.01}) == ErrorCode::AlphaNotBelowBeta);
  CHECK(code_of({1, 0.5, 0, 1.2, 0, 0.01}) == ErrorCode::BetaAboveOne);
  CHECK(code_of({0, 0.5, -1, 1, 0, 0.01}) == ErrorCode::NonPositiveC1);
  CHECK(code_of({1, -0.5, -1, 1, 0, 0.01}) == ErrorCode::NonPositiveC2);
  CHECK(code_of({1, 0.5, -1, 1, -1, 0.01}) == ErrorCode::NegativeFloor);
  CHECK(code_of({1, 0.5, -1, 1, 0, 0.0}) == ErrorCode::POutOfRange);
  CHECK(code_of({1, 0.5, -1, 1, 0, 1.0}) == ErrorCode::POutOfRange);
  CHECK(code_of({1, 0.5, NAN, 1, 0, 0.1}) == ErrorCode::NonFiniteParameter);
}

TEST_CASE("with_p revalidates") {
  const ModelParams m = validate(tcp());
  CHECK(m.with_p(0.5).p() == 0.5);
  CHECK_THROWS_AS(m.with_p(1.5), Error);
}

TEST_CASE("derive_exponents on the named special cases") {
  auto e = derive_exponents(validate(tcp()));
  CHECK(e.gamma == 0.5);
  CHECK(e.nu == 1.0);
  CHECK(e.tau == 0.0);

  e = derive_exponents(validate({1, 0.5, 0, 1, 0, 0.01}));
  CHECK(e.gamma == 1.0);
  CHECK(e.nu == 1.0);
  CHECK(e.tau == 0.0);

  e = derive_exponents(validate({1, 1, 0, 0.5, 0.01, 0.01}));
  CHECK(e.gamma == 2.0);
  CHECK(e.nu == 2.0);
  CHECK(e.tau == 0.5);
}

TEST_CASE("exponent identities and nu - tau = (nu + 1) / 2 over random (alpha, beta)") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> alpha_dist(-5.0, 0.99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double alpha = alpha_dist(gen);
    const double beta = (i % 10 == 0) ? 1.0 : alpha + (1.0 - alpha) * (0.01 + 0.99 * unit(gen));
    const auto e = ScalingExponents::from(alpha, beta);
    for (double r : exponent_identity_residuals(e, alpha, beta)) CHECK(std::abs(r) <= 1e-12);
    CHECK(e.nu - e.tau == doctest::Approx((e.nu + 1) / 2).epsilon(1e-14));
    CHECK(e.nu - e.tau > 0.0);
    CHECK(e.gamma > 0.0);
    CHECK(e.nu >= 1.0 - 1e-15);
    if (beta == 1.0) {
      CHECK(e.nu == 1.0);
      CHECK(e.tau == 0.0);
    } else {
      CHECK(e.tau > 0.0);
    }
  }
}

TEST_CASE("equilibrium values") {
  CHECK(equilibrium(validate({1, 1, 0, 0.5, 0.1, 0.01}), 0.0) == 1.0);
  CHECK(equilibrium(validate(tcp()), 0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(equilibrium(validate({2, 1, 0, 0.5, 0.1, 0.01}), 0.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK_THROWS_AS(equilibrium(validate(tcp()), 1.0), Error);
  CHECK_THROWS_AS(equilibrium(validate(tcp()), -0.1), Error);
}

TEST_CASE("equilibrium is strictly decreasing in p and continuous at 0") {
  const ModelParams m = validate({1.3, 0.7, -0.4, 0.6, 0.1, 0.01});
  double previous = equilibrium(m, 0.0);
  for (double q = 1e-6; q < 0.99; q *= 1.7) {
    const double c = equilibrium(m, q);
    CHECK(c < previous);
    previous = c;
  }
  CHECK(equilibrium(m, 1e-14) == doctest::Approx(equilibrium(m, 0.0)).epsilon(1e-12));
}

TEST_CASE("ou_coefficients golden values") {
  auto ou = ou_coefficients(validate({1, 1, 0, 0.5, 0.1, 0.01}));
  CHECK(ou.mu == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ou.sigma == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ou.stationary_variance == doctest::Approx(1.0).epsilon(1e-15));

  ou = ou_coefficients(validate({2, 1, 0, 0.5, 0.1, 0.01}));
  CHECK(ou.mu == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(ou.sigma == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ou.stationary_variance == doctest::Approx(8.0).epsilon(1e-14));

  // Both printed forms evaluated at 40 digits agree on these.
  ou = ou_coefficients(validate({1, 0.5, -1, 0.5, 0.1, 0.01}));
  CHECK(ou.mu == doctest::Approx(0.5952753944880748).epsilon(1e-14));
  CHECK(ou.sigma == doctest::Approx(0.6299605249474366).epsilon(1e-14));
  CHECK(ou.stationary_variance == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(ou.stationary_variance == ou.sigma * ou.sigma / (2 * ou.mu));
}

TEST_CASE("ou_coefficients rejects beta = 1") {
  try {
    ou_coefficients(validate(tcp()));
    FAIL("expected BetaMustBeBelowOne");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BetaMustBeBelowOne);
  }
}

TEST_CASE("both forms of mu agree over random parameters") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double alpha = -5.0 + 5.99 * unit(gen);
    const double beta = alpha + (1.0 - alpha) * (0.01 + 0.98 * unit(gen));
    const double c1 = 0.1 + 3.0 * unit(gen);
    const double c2 = 0.1 + 3.0 * unit(gen);
    const ModelParams m = validate({c1, c2, alpha, beta, 0.1, 0.01});
    const auto ou = ou_coefficients(m);
    const double expanded = ou_mu_expanded(m);
    CHECK(std::abs(ou.mu - expanded) <= 1e-10 * std::abs(expanded));
    CHECK(std::abs(ou.sigma - ou_sigma_expanded(m)) <= 1e-10 * ou.sigma);
  }
}

TEST_CASE("log forms of mu match the double forms and survive overflow") {
  for (const RawParams& raw : {RawParams{1, 1, 0, 0.5, 0.1, 0.01}, RawParams{2, 1, 0, 0.5, 0.1, 0.01},
                               RawParams{1, 0.5, -1, 0.5, 0.1, 0.01}, RawParams{0.3, 2.2, 0.4, 0.9, 0.1, 0.01}}) {
    const ModelParams m = validate(raw);
    const double mu = ou_coefficients(m).mu;
    CHECK(static_cast<double>(ou_log_mu(m)) == doctest::Approx(std::log(mu)).epsilon(1e-14));
    CHECK(static_cast<double>(ou_log_mu_expanded(m)) == doctest::Approx(std::log(mu)).epsilon(1e-14));
  }

  // beta - alpha = 1e-3: gamma = 1000 and mu underflows the double range.
  // By hand, log mu = log(1e-3) + (-0.699 log 3 + 0.7 log 0.2) / 1e-3.
  const ModelParams huge = validate({3.0, 0.2, 0.3, 0.301, 0.1, 0.01});
  const long double a = ou_log_mu(huge), b = ou_log_mu_expanded(huge);
  CHECK(std::isfinite(static_cast<double>(a)));
  const double by_hand = std::log(1e-3) + (-0.699 * std::log(3.0) + 0.7 * std::log(0.2)) / 1e-3;
  CHECK(static_cast<double>(a) == doctest::Approx(by_hand).epsilon(1e-9));
  CHECK(std::abs(static_cast<double>(a - b)) <= 1e-10 * static_cast<double>(std::abs(a)));
  try {
    ou_coefficients(huge);
    FAIL("expected CoefficientOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CoefficientOutOfRange);
  }
}
