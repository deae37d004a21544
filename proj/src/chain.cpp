#include "paradigm/chain.hpp"

#include <cmath>
#include <string>

#include "paradigm/error.hpp"

namespace paradigm {

namespace {

// Exact shortcuts for the exponents that appear in practice (TCP, Scalable
// TCP, square-root decrease). Every code path uses this, so runs stay
// self-consistent bit for bit.
inline double power(double w, double e) {
  if (e == 0.0) return 1.0;
  if (e == 1.0) return w;
  if (e == -1.0) return 1.0 / w;
  if (e == 0.5) return std::sqrt(w);
  return std::pow(w, e);
}

inline void check_window(double w) {
  if (!std::isfinite(w) || w > kWindowOverflow) {
    throw Error(ErrorCode::NonFiniteWindow, "window left the representable range: " + std::to_string(w));
  }
}

void check_start(const ModelParams& params, double w0) {
  if (!std::isfinite(w0) || !(w0 > 0.0) || w0 < params.ell()) {
    throw Error(ErrorCode::InvalidArgument, "w0 must be finite, > 0 and >= ell");
  }
}

}  // namespace

ChainState step(const ChainState& state, const ModelParams& params, bool loss) {
  const double w = state.w;
  const double raw = loss ? w - params.c2() * power(w, params.beta()) : w + params.c1() * power(w, params.alpha());
  ChainState next = state;
  ++next.step_index;
  if (raw < params.ell()) {
    ++next.reflection_count;
    next.reflection_mass += params.ell() - raw;
    next.w = params.ell();
  } else {
    next.w = raw;
  }
  check_window(next.w);
  return next;
}

ChainRunner::ChainRunner(const ModelParams& params, double w0, RngStream& rng, LossSampling sampling)
    : params_(params), rng_(&rng), sampling_(sampling), log_one_minus_p_(std::log1p(-params.p())) {
  check_start(params, w0);
  state_.w = w0;
}

void ChainRunner::apply_successes(std::uint64_t k) {
  if (k == 0) return;
  if (params_.alpha() == 0.0) {
    // The increment does not depend on w; the floor cannot bind on growth.
    state_.w += static_cast<double>(k) * params_.c1();
    state_.step_index += k;
    check_window(state_.w);
    return;
  }
  for (std::uint64_t i = 0; i < k; ++i) state_ = step(state_, params_, false);
}

void ChainRunner::advance(std::uint64_t n_steps) {
  if (sampling_ == LossSampling::per_step) {
    const double p = params_.p();
    for (std::uint64_t i = 0; i < n_steps; ++i) state_ = step(state_, params_, rng_->uniform() < p);
    return;
  }
  while (n_steps > 0) {
    if (!has_pending_) {
      pending_successes_ = rng_->geometric_failures(log_one_minus_p_);
      has_pending_ = true;
    }
    const std::uint64_t run = std::min(n_steps, pending_successes_);
    apply_successes(run);
    pending_successes_ -= run;
    n_steps -= run;
    if (n_steps > 0) {
      state_ = step(state_, params_, true);
      has_pending_ = false;
      --n_steps;
    }
  }
}

void ChainRunner::advance_to(std::uint64_t step_index) {
  if (step_index > state_.step_index) advance(step_index - state_.step_index);
}

ChainTrajectory simulate_path(const ModelParams& params, double w0, std::uint64_t n_steps, RngStream& rng) {
  check_start(params, w0);
  ChainTrajectory out;
  out.windows.reserve(static_cast<std::size_t>(n_steps) + 1);
  ChainState state;
  state.w = w0;
  out.windows.push_back(w0);
  const double p = params.p();
  for (std::uint64_t i = 0; i < n_steps; ++i) {
    state = step(state, params, rng.uniform() < p);
    out.windows.push_back(state.w);
  }
  out.final_state = state;
  return out;
}

std::uint64_t step_index_at(double t, double steps_per_unit_time) {
  const double x = t * steps_per_unit_time;
  const double nearest = std::round(x);
  // Grid products like 0.7 * 1e3 can land just below the intended integer.
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, x)) return static_cast<std::uint64_t>(nearest);
  return static_cast<std::uint64_t>(std::floor(x));
}

RescaledPath rescaled_path(const ModelParams& params, double w0, double horizon, double grid_dt, RngStream& rng,
                           const RescaledPathOptions& options) {
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be > 0");
  const ScalingExponents e = derive_exponents(params);
  const double space_scale = std::pow(params.p(), e.gamma);
  const double steps_per_unit_time = std::pow(params.p(), -e.nu);
  const double total_steps = horizon * steps_per_unit_time;
  if (!(total_steps <= static_cast<double>(options.step_budget))) {
    throw Error(ErrorCode::HorizonTooLarge,
                "horizon needs " + std::to_string(total_steps) + " chain steps, budget is " +
                    std::to_string(options.step_budget));
  }

  std::vector<double> times = make_time_grid(horizon, grid_dt);
  std::vector<double> values;
  values.reserve(times.size());
  ChainRunner runner(params, w0, rng, options.sampling);
  for (double t : times) {
    runner.advance_to(step_index_at(t, steps_per_unit_time));
    values.push_back(space_scale * runner.state().w);
  }
  return {PathSample(std::move(times), std::move(values)), runner.state()};
}

PathSample fluctuation_path(const ModelParams& params, const PathSample& zeta_p_path, const PathSample& z_p_path) {
  if (!zeta_p_path.same_grid(z_p_path)) {
    throw Error(ErrorCode::GridMismatch, "fluctuation_path needs both paths on the same grid");
  }
  const double tau = derive_exponents(params).tau;
  const double scale = std::pow(params.p(), -tau);
  std::vector<double> values;
  values.reserve(z_p_path.size());
  for (std::size_t i = 0; i < z_p_path.size(); ++i) {
    values.push_back(scale * (z_p_path.values()[i] - zeta_p_path.values()[i]));
  }
  return PathSample(z_p_path.times(), std::move(values));
}

EmpiricalDistribution stationary_sample(const ModelParams& params, double w0, std::uint64_t burn_in,
                                        std::uint64_t n_samples, std::uint64_t thin, RngStream& rng,
                                        LossSampling sampling) {
  if (thin < 1) throw Error(ErrorCode::InvalidArgument, "thin must be >= 1");
  if (n_samples < 2) throw Error(ErrorCode::InvalidArgument, "n_samples must be >= 2");
  ChainRunner runner(params, w0, rng, sampling);
  runner.advance(burn_in);
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(n_samples));
  samples.push_back(runner.state().w);
  for (std::uint64_t j = 1; j < n_samples; ++j) {
    runner.advance(thin);
    samples.push_back(runner.state().w);
  }
  return EmpiricalDistribution(std::move(samples));
}

}  // namespace paradigm
