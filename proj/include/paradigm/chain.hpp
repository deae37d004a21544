#pragma once

#include <cstdint>
#include <vector>

#include "paradigm/params.hpp"
#include "paradigm/path.hpp"
#include "paradigm/rng.hpp"
#include "paradigm/stats.hpp"

namespace paradigm {

/// Congestion window after step_index packets, plus floor diagnostics.
struct ChainState {
  double w = 0.0;
  std::uint64_t step_index = 0;
  std::uint64_t reflection_count = 0;  // steps where the floor clamped
  double reflection_mass = 0.0;        // running sum of ell - (pre-floor value)

  bool operator==(const ChainState&) const = default;
};

/// Windows above this are treated as a misconfigured run.
inline constexpr double kWindowOverflow = 1e300;

/// One transition. Without loss: max(w + c1 w^alpha, ell); with loss:
/// max(w - c2 w^beta, ell). Throws NonFiniteWindow on overflow or NaN.
ChainState step(const ChainState& state, const ModelParams& params, bool loss);

/// How loss indicators are drawn.
///   per_step:  one uniform per packet, loss := u < p.
///   geometric: one draw per loss, the run of successes in between is
///              Geometric(p). Same law, far fewer draws at small p. With
///              alpha = 0 a run of k successes is applied as w + k c1.
enum class LossSampling { per_step, geometric };

/// Chain simulator that can be advanced by arbitrary step counts. Draws from
/// the referenced stream, which must outlive the runner.
class ChainRunner {
 public:
  ChainRunner(const ModelParams& params, double w0, RngStream& rng, LossSampling sampling = LossSampling::per_step);

  const ChainState& state() const noexcept { return state_; }
  const ModelParams& params() const noexcept { return params_; }

  void advance(std::uint64_t n_steps);
  /// Advances to an absolute step index (no-op if already there).
  void advance_to(std::uint64_t step_index);

 private:
  void apply_successes(std::uint64_t k);

  ModelParams params_;
  RngStream* rng_;
  LossSampling sampling_;
  ChainState state_;
  double log_one_minus_p_;
  std::uint64_t pending_successes_ = 0;
  bool has_pending_ = false;
};

struct ChainTrajectory {
  std::vector<double> windows;  // n_steps + 1 entries, W_0 .. W_n
  ChainState final_state;
};

/// n_steps per-step transitions from w0 (one uniform per step).
ChainTrajectory simulate_path(const ModelParams& params, double w0, std::uint64_t n_steps, RngStream& rng);

struct RescaledPathOptions {
  LossSampling sampling = LossSampling::per_step;
  std::uint64_t step_budget = 1'000'000'000'000ULL;
};

struct RescaledPath {
  PathSample path;         // Z_p(t) = p^gamma W_floor(t p^-nu) on the grid
  ChainState final_state;  // after floor(horizon p^-nu) steps
};

/// Chain step index that rescaled time t maps to: floor(t p^-nu), robust to
/// products that land a few ulps below an integer.
std::uint64_t step_index_at(double t, double steps_per_unit_time);

/// Throws HorizonTooLarge when floor(horizon p^-nu) exceeds the step budget.
RescaledPath rescaled_path(const ModelParams& params, double w0, double horizon, double grid_dt, RngStream& rng,
                           const RescaledPathOptions& options = {});

/// xi_p(t) = p^-tau (Z_p(t) - zeta_p(t)). Throws GridMismatch on differing grids.
PathSample fluctuation_path(const ModelParams& params, const PathSample& zeta_p_path, const PathSample& z_p_path);

/// Raw W values W_{burn_in + j thin}, j = 0 .. n_samples - 1.
EmpiricalDistribution stationary_sample(const ModelParams& params, double w0, std::uint64_t burn_in,
                                        std::uint64_t n_samples, std::uint64_t thin, RngStream& rng,
                                        LossSampling sampling = LossSampling::per_step);

}  // namespace paradigm
