#include "paradigm/limits.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "paradigm/error.hpp"

namespace paradigm {

double flow_map(double z0, double c1, double alpha, double dt) {
  if (!(z0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "flow_map needs z0 > 0");
  if (!(dt >= 0.0)) throw Error(ErrorCode::InvalidArgument, "flow_map needs dt >= 0");
  if (!(alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "flow_map needs alpha < 1");
  if (dt == 0.0) return z0;
  if (alpha == 0.0) return z0 + c1 * dt;
  const double lift = 1.0 - alpha;
  return std::pow(c1 * lift * dt + std::pow(z0, lift), 1.0 / lift);
}

double flow_time_to(double z0, double target, double c1, double alpha) {
  if (!(target >= z0)) throw Error(ErrorCode::InvalidArgument, "the flow only increases");
  const double lift = 1.0 - alpha;
  return (std::pow(target, lift) - std::pow(z0, lift)) / (c1 * lift);
}

// ---------------------------------------------------------------------------
// Poisson-driven limit

PoissonLimitProcess::PoissonLimitProcess(const ModelParams& params, double z0, RngStream& rng)
    : c1_(params.c1()),
      alpha_(params.alpha()),
      keep_(1.0 - params.c2()),
      rng_(&rng),
      anchor_time_(0.0),
      anchor_value_(z0),
      now_(0.0),
      value_(z0) {
  if (!params.beta_is_one()) throw Error(ErrorCode::BetaMustBeOne, "the Poisson-driven limit needs beta = 1");
  if (!(z0 > 0.0) || !std::isfinite(z0)) throw Error(ErrorCode::InvalidArgument, "z0 must be finite and > 0");
  next_jump_ = rng_->exponential();
}

void PoissonLimitProcess::advance_to(double t, std::vector<double>* jump_times,
                                     std::vector<double>* values_before_jump) {
  if (t < now_) throw Error(ErrorCode::InvalidArgument, "cannot run the process backwards");
  while (next_jump_ <= t) {
    const double left = flow_map(anchor_value_, c1_, alpha_, next_jump_ - anchor_time_);
    if (jump_times) jump_times->push_back(next_jump_);
    if (values_before_jump) values_before_jump->push_back(left);
    anchor_value_ = keep_ * left;
    anchor_time_ = next_jump_;
    next_jump_ += rng_->exponential();
    ++jumps_;
  }
  now_ = t;
  value_ = flow_map(anchor_value_, c1_, alpha_, t - anchor_time_);
}

std::optional<double> PoissonLimitProcess::run_until_hit(double target, double horizon) {
  while (true) {
    if (value_ == target) return now_;
    if (anchor_value_ <= target) {
      const double hit = anchor_time_ + flow_time_to(anchor_value_, target, c1_, alpha_);
      if (hit >= now_ && hit < next_jump_ && hit <= horizon) {
        now_ = hit;
        value_ = target;
        return hit;
      }
    }
    if (next_jump_ > horizon) {
      advance_to(std::max(now_, horizon));
      return std::nullopt;
    }
    advance_to(next_jump_);
  }
}

PoissonLimitPath simulate_poisson_limit(const ModelParams& params, double z0, double horizon, double grid_dt,
                                        RngStream& rng) {
  PoissonLimitProcess process(params, z0, rng);
  PoissonLimitPath out;
  std::vector<double> times = make_time_grid(horizon, grid_dt);
  std::vector<double> values;
  values.reserve(times.size());
  for (double t : times) {
    process.advance_to(t, &out.jump_times, &out.values_before_jump);
    values.push_back(process.value());
  }
  out.path = PathSample(std::move(times), std::move(values));
  return out;
}

// ---------------------------------------------------------------------------
// Fluid ODE

namespace {

void rk4_integrate(const FluidCoefficients& k, double zeta0, double p_factor, const std::vector<double>& grid,
                   std::vector<double>& out) {
  const double grow = k.c1 * (1.0 - p_factor);
  auto rhs = [&](double z) {
    if (!(z > 0.0)) {
      throw Error(ErrorCode::NonPositiveState, "zeta stage value " + std::to_string(z) + " <= 0; reduce dt");
    }
    return grow * std::pow(z, k.alpha) - k.c2 * std::pow(z, k.beta);
  };
  out.clear();
  out.reserve(grid.size());
  double z = zeta0;
  out.push_back(z);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double h = grid[i] - grid[i - 1];
    const double k1 = rhs(z);
    const double k2 = rhs(z + 0.5 * h * k1);
    const double k3 = rhs(z + 0.5 * h * k2);
    const double k4 = rhs(z + h * k3);
    z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!(z > 0.0)) throw Error(ErrorCode::NonPositiveState, "zeta became non-positive; reduce dt");
    out.push_back(z);
  }
}

void check_fluid(const FluidCoefficients& k, double zeta0, double p_factor, double dt) {
  if (!(k.c1 > 0.0) || !(k.c2 > 0.0) || !(k.alpha < k.beta) || !(k.beta <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "fluid coefficients need c1, c2 > 0 and alpha < beta <= 1");
  }
  if (!(zeta0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "zeta0 must be > 0");
  if (!(p_factor >= 0.0 && p_factor < 1.0)) throw Error(ErrorCode::InvalidArgument, "p_factor must lie in [0, 1)");
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
}

}  // namespace

PathSample rk4_zeta_path(const FluidCoefficients& coeffs, double zeta0, double p_factor, double horizon, double dt) {
  check_fluid(coeffs, zeta0, p_factor, dt);
  std::vector<double> grid = make_time_grid(horizon, dt);
  std::vector<double> values;
  rk4_integrate(coeffs, zeta0, p_factor, grid, values);
  return PathSample(std::move(grid), std::move(values));
}

OdeSolution solve_zeta(const FluidCoefficients& coeffs, double zeta0, double p_factor, double horizon, double dt,
                       double equilibrium_tolerance) {
  OdeSolution out;
  out.path = rk4_zeta_path(coeffs, zeta0, p_factor, horizon, dt);
  const PathSample half = rk4_zeta_path(coeffs, zeta0, p_factor, horizon, dt / 2.0);
  out.halving_error = std::abs(out.path.back_value() - half.back_value());
  const double gamma = 1.0 / (coeffs.beta - coeffs.alpha);
  const double target = std::pow(coeffs.c1 * (1.0 - p_factor) / coeffs.c2, gamma);
  out.equilibrium_reached = std::abs(out.path.back_value() - target) < equilibrium_tolerance;
  return out;
}

// ---------------------------------------------------------------------------
// Fluctuations

XiDriver::XiDriver(const PathSample& zeta_path, const ModelParams& params) : times_(zeta_path.times()) {
  if (params.beta_is_one()) throw Error(ErrorCode::BetaMustBeBelowOne, "the fluctuation SDE needs beta < 1");
  if (zeta_path.empty()) throw Error(ErrorCode::InvalidArgument, "empty zeta path");
  const double c1 = params.c1(), c2 = params.c2(), a = params.alpha(), b = params.beta();
  drift_.reserve(times_.size());
  diffusion_.reserve(times_.size());
  for (double z : zeta_path.values()) {
    if (!(z > 0.0)) throw Error(ErrorCode::NonPositiveState, "zeta must stay positive");
    drift_.push_back(c1 * a * std::pow(z, a - 1.0) - c2 * b * std::pow(z, b - 1.0));
    diffusion_.push_back(c2 * std::pow(z, b));
  }
  for (std::size_t i = 1; i < times_.size(); ++i) max_spacing_ = std::max(max_spacing_, times_[i] - times_[i - 1]);
}

PathSample XiDriver::simulate(double xi0, double horizon, double dt, RngStream& rng) const {
  if (max_spacing_ > dt * (1.0 + 1e-9)) {
    throw Error(ErrorCode::GridTooCoarse, "zeta grid spacing " + std::to_string(max_spacing_) +
                                              " is coarser than dt " + std::to_string(dt));
  }
  if (times_.back() < horizon * (1.0 - 1e-12)) {
    throw Error(ErrorCode::InvalidArgument, "zeta path does not cover the horizon");
  }
  std::vector<double> grid = make_time_grid(horizon, dt);
  std::vector<double> values;
  values.reserve(grid.size());
  double xi = xi0;
  values.push_back(xi);
  std::size_t j = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double t = grid[i - 1];
    const double slack = 1e-9 * std::max(1.0, t);
    while (j + 1 < times_.size() && times_[j + 1] <= t + slack) ++j;
    const double h = grid[i] - t;
    xi += drift_[j] * xi * h - diffusion_[j] * std::sqrt(h) * rng.normal();
    values.push_back(xi);
  }
  return PathSample(std::move(grid), std::move(values));
}

PathSample simulate_xi(const PathSample& zeta_path, const ModelParams& params, double xi0, double horizon, double dt,
                       RngStream& rng) {
  return XiDriver(zeta_path, params).simulate(xi0, horizon, dt, rng);
}

PathSample simulate_ou(const OuCoefficients& coeffs, double xi0, double horizon, double dt, RngStream& rng) {
  std::vector<double> grid = make_time_grid(horizon, dt);
  std::vector<double> values;
  values.reserve(grid.size());
  double xi = xi0;
  values.push_back(xi);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double h = grid[i] - grid[i - 1];
    const double decay = std::exp(-coeffs.mu * h);
    const double spread = coeffs.sigma * std::sqrt(-std::expm1(-2.0 * coeffs.mu * h) / (2.0 * coeffs.mu));
    xi = decay * xi + spread * rng.normal();
    values.push_back(xi);
  }
  return PathSample(std::move(grid), std::move(values));
}

NormalLaw ou_stationary_law(const OuCoefficients& coeffs) {
  return {0.0, coeffs.sigma * coeffs.sigma / (2.0 * coeffs.mu)};
}

double ou_marginal_variance(const OuCoefficients& coeffs, double t) {
  return ou_stationary_law(coeffs).variance * -std::expm1(-2.0 * coeffs.mu * t);
}

}  // namespace paradigm
