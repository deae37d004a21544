#pragma once

#include <optional>
#include <vector>

#include "paradigm/params.hpp"
#include "paradigm/path.hpp"
#include "paradigm/rng.hpp"

namespace paradigm {

/// Exact solution of dz = c1 z^alpha dt after time dt:
/// (c1 (1 - alpha) dt + z0^{1-alpha})^{1/(1-alpha)}. Requires z0 > 0, alpha < 1, dt >= 0.
double flow_map(double z0, double c1, double alpha, double dt);

/// Time the flow needs to climb from z0 to target >= z0.
double flow_time_to(double z0, double target, double c1, double alpha);

struct PoissonLimitPath {
  std::vector<double> jump_times;
  std::vector<double> values_before_jump;  // Z(s-) at each jump
  PathSample path;
};

/// Event-driven simulation of the beta = 1 limit: the closed-form flow
/// between unit-rate Poisson events, multiplication by (1 - c2) at each
/// event. Throws BetaMustBeOne otherwise.
PoissonLimitPath simulate_poisson_limit(const ModelParams& params, double z0, double horizon, double grid_dt,
                                        RngStream& rng);

/// Incremental form of the same process, for long runs that only need
/// values at selected times.
class PoissonLimitProcess {
 public:
  PoissonLimitProcess(const ModelParams& params, double z0, RngStream& rng);

  double time() const noexcept { return now_; }
  double value() const noexcept { return value_; }
  std::size_t jumps() const noexcept { return jumps_; }

  /// Advances to t >= time(). Jump left limits are appended to the optional sinks.
  void advance_to(double t, std::vector<double>* jump_times = nullptr,
                  std::vector<double>* values_before_jump = nullptr);

  /// Runs until the value first equals target or until the horizon.
  /// Returns the hitting time, or nothing if the level is not reached.
  std::optional<double> run_until_hit(double target, double horizon);

 private:
  double c1_;
  double alpha_;
  double keep_;  // 1 - c2
  RngStream* rng_;
  double anchor_time_;   // last jump (or start)
  double anchor_value_;  // value right after it
  double next_jump_;
  double now_;
  double value_;
  std::size_t jumps_ = 0;
};

/// Fluid drift coefficients, without a loss probability.
struct FluidCoefficients {
  double c1;
  double c2;
  double alpha;
  double beta;

  static FluidCoefficients from(const ModelParams& params) {
    return {params.c1(), params.c2(), params.alpha(), params.beta()};
  }
};

struct OdeSolution {
  PathSample path;
  bool equilibrium_reached = false;
  double halving_error = 0.0;  // |zeta_dt(T) - zeta_{dt/2}(T)|
};

inline constexpr double kEquilibriumTolerance = 1e-6;

/// Fixed-step RK4 for zeta' = c1 (1 - p_factor) zeta^alpha - c2 zeta^beta on [0, horizon].
/// Throws NonPositiveState if any stage value is <= 0.
OdeSolution solve_zeta(const FluidCoefficients& coeffs, double zeta0, double p_factor, double horizon, double dt,
                       double equilibrium_tolerance = kEquilibriumTolerance);

/// Plain RK4 trajectory without the halving estimate or equilibrium check.
PathSample rk4_zeta_path(const FluidCoefficients& coeffs, double zeta0, double p_factor, double horizon, double dt);

/// Drift and diffusion of the fluctuation SDE tabulated on a zeta grid, so
/// repeated replicates do not recompute powers of zeta.
class XiDriver {
 public:
  /// Throws BetaMustBeBelowOne for beta = 1.
  XiDriver(const PathSample& zeta_path, const ModelParams& params);

  /// Throws GridTooCoarse when the zeta grid spacing exceeds dt and
  /// InvalidArgument when the zeta path does not cover [0, horizon].
  PathSample simulate(double xi0, double horizon, double dt, RngStream& rng) const;

 private:
  std::vector<double> times_;
  std::vector<double> drift_;      // c1 alpha zeta^{alpha-1} - c2 beta zeta^{beta-1}
  std::vector<double> diffusion_;  // c2 zeta^beta
  double max_spacing_ = 0.0;
};

/// Euler-Maruyama for
///   d xi = (c1 alpha zeta^{alpha-1} - c2 beta zeta^{beta-1}) xi dt - c2 zeta^beta dB,
/// reading zeta at the nearest grid point to the left. Throws GridTooCoarse
/// when the zeta grid spacing exceeds dt, BetaMustBeBelowOne for beta = 1.
PathSample simulate_xi(const PathSample& zeta_path, const ModelParams& params, double xi0, double horizon, double dt,
                       RngStream& rng);

/// Exact OU transition sampling on the grid 0, dt, ..., horizon.
PathSample simulate_ou(const OuCoefficients& coeffs, double xi0, double horizon, double dt, RngStream& rng);

struct NormalLaw {
  double mean;
  double variance;
};

NormalLaw ou_stationary_law(const OuCoefficients& coeffs);

/// Variance at time t of the OU process started from a fixed point.
double ou_marginal_variance(const OuCoefficients& coeffs, double t);

}  // namespace paradigm
