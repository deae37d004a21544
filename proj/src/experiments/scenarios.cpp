#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "paradigm/error.hpp"
#include "paradigm/experiments.hpp"
#include "paradigm/limits.hpp"
#include "paradigm/stats.hpp"
#include "parallel.hpp"

namespace paradigm {

namespace {

constexpr std::uint64_t kChainFamily = 0;
constexpr std::uint64_t kLimitFamily = 1;
constexpr std::uint64_t kXiFamily = 2;

struct GridPoint {
  std::size_t index;
  ModelParams params;
  ScalingExponents exponents;
  double scale;               // p^gamma
  double steps_per_unit;      // p^-nu
  double w0;
};

std::vector<GridPoint> grid_points(const ExperimentConfig& config) {
  std::vector<GridPoint> out;
  for (std::size_t i = 0; i < config.p_grid.size(); ++i) {
    RawParams raw = config.params;
    raw.p = config.p_grid[i];
    ModelParams m(raw);
    const auto e = derive_exponents(m);
    const double w0 = starting_window(config, m);
    out.push_back({i, m, e, std::pow(raw.p, e.gamma), std::pow(raw.p, -e.nu), w0});
  }
  return out;
}

/// Grid indices ordered from largest to smallest p.
std::vector<std::size_t> by_decreasing_p(const ExperimentConfig& config) {
  std::vector<std::size_t> order(config.p_grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return config.p_grid[a] > config.p_grid[b]; });
  return order;
}

class Clock {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

struct Builder {
  ScenarioReport report;

  void row(std::string family, std::optional<double> p, std::optional<std::uint64_t> rep, std::string metric,
           double value) {
    report.rows.push_back({std::move(family), p, rep, std::move(metric), value});
  }

  void moments_rows(std::optional<double> p, const std::string& prefix, const EmpiricalDistribution& d) {
    row("moment", p, {}, prefix + "_mean", sample_mean(d));
    row("moment", p, {}, prefix + "_variance", sample_variance(d));
    try {
      const auto m = moments(d);
      row("moment", p, {}, prefix + "_skewness", m.skewness);
      row("moment", p, {}, prefix + "_excess_kurtosis", m.excess_kurtosis);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateSample) throw;
    }
  }

  void at_most(std::string name, double value, double threshold) {
    report.checks.push_back({std::move(name), value, "<=", threshold, threshold, value <= threshold});
  }
  void at_least(std::string name, double value, double threshold) {
    report.checks.push_back({std::move(name), value, ">=", threshold, threshold, value >= threshold});
  }
  void within(std::string name, double value, double lo, double hi) {
    report.checks.push_back({std::move(name), value, "in", lo, hi, value >= lo && value <= hi});
  }

  void time(std::string what, Clock& clock) { report.timings_seconds.emplace_back(std::move(what), clock.lap()); }
};

std::string at_p(const std::string& name, double p) { return name + "@p=" + format_double(p); }

void require_budget(std::uint64_t steps, std::uint64_t budget) {
  if (steps > budget) {
    throw Error(ErrorCode::HorizonTooLarge,
                std::to_string(steps) + " chain steps exceed the step budget " + std::to_string(budget));
  }
}

/// KS along the grid must not grow as p decreases, up to the slack.
void monotone_checks(Builder& b, const ExperimentConfig& config, const std::vector<double>& ks,
                     const std::string& name) {
  const auto order = by_decreasing_p(config);
  for (std::size_t k = 1; k < order.size(); ++k) {
    const double larger = ks[order[k - 1]];
    const double smaller = ks[order[k]];
    b.at_most(name + "_nonincreasing@p=" + format_double(config.p_grid[order[k]]), smaller,
              larger + config.thresholds.monotone_slack);
  }
}

std::size_t smallest_p_index(const ExperimentConfig& config) { return by_decreasing_p(config).back(); }

}  // namespace

bool ScenarioReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

ScenarioReport run_limit_beta1(const ExperimentConfig& config, const RunOptions& options) {
  validate_config(config);
  if (config.scenario != Scenario::limit_beta1) throw Error(ErrorCode::InvalidConfig, "scenario is not limit_beta1");
  Builder b;
  b.report.config = config;
  Clock clock;
  const auto grid = grid_points(config);
  const std::size_t reps = config.replicates;
  for (const auto& g : grid) require_budget(step_index_at(config.horizon, g.steps_per_unit), config.step_budget);

  std::vector<std::vector<double>> chain(grid.size(), std::vector<double>(reps));
  std::vector<std::vector<double>> limit(grid.size(), std::vector<double>(reps));
  detail::parallel_for(grid.size() * reps * 2, options.threads, [&](std::size_t task) {
    const std::size_t slot = task / 2;
    const std::size_t gi = slot / reps, r = slot % reps;
    const GridPoint& g = grid[gi];
    if (task % 2 == 0) {
      RngStream rng(config.seed, stream_id_for(kChainFamily, gi, r));
      ChainRunner runner(g.params, g.w0, rng, config.loss_sampling);
      runner.advance_to(step_index_at(config.horizon, g.steps_per_unit));
      chain[gi][r] = g.scale * runner.state().w;
    } else {
      RngStream rng(config.seed, stream_id_for(kLimitFamily, gi, r));
      PoissonLimitProcess proc(g.params, g.scale * g.w0, rng);
      proc.advance_to(config.horizon);
      limit[gi][r] = proc.value();
    }
  });
  b.time("simulate", clock);

  std::vector<double> ks(grid.size());
  for (const auto& g : grid) {
    const double p = g.params.p();
    for (std::size_t r = 0; r < reps; ++r) {
      b.row("replicate", p, r, "chain_terminal", chain[g.index][r]);
      b.row("replicate", p, r, "limit_terminal", limit[g.index][r]);
    }
    const EmpiricalDistribution a(chain[g.index]), l(limit[g.index]);
    ks[g.index] = ks_two_sample(a, l);
    b.row("distance", p, {}, "ks", ks[g.index]);
    b.row("distance", p, {}, "w1", wasserstein1(a, l));
    b.row("distance", p, {}, "ks_critical_1pct", ks_critical_value(a.size(), l.size(), 0.01));
    b.moments_rows(p, "chain", a);
    b.moments_rows(p, "limit", l);
  }
  const std::size_t last = smallest_p_index(config);
  b.at_most(at_p("ks", config.p_grid[last]), ks[last], config.thresholds.ks_max);
  monotone_checks(b, config, ks, "ks");
  b.time("report", clock);
  return std::move(b.report);
}

ScenarioReport run_lln(const ExperimentConfig& config, const RunOptions& options) {
  validate_config(config);
  if (config.scenario != Scenario::lln) throw Error(ErrorCode::InvalidConfig, "scenario is not lln");
  Builder b;
  b.report.config = config;
  Clock clock;
  const auto grid = grid_points(config);
  const std::size_t reps = config.replicates;
  const auto coeffs = FluidCoefficients::from(grid.front().params);

  std::vector<OdeSolution> zeta;
  for (const auto& g : grid) {
    zeta.push_back(solve_zeta(coeffs, g.scale * g.w0, 0.0, config.horizon, config.solver_dt));
  }
  b.time("fluid", clock);

  std::vector<std::vector<double>> sup_dev(grid.size(), std::vector<double>(reps));
  std::vector<std::vector<double>> dev0(grid.size(), std::vector<double>(reps));
  const RescaledPathOptions opts{config.loss_sampling, config.step_budget};
  detail::parallel_for(grid.size() * reps, options.threads, [&](std::size_t task) {
    const std::size_t gi = task / reps, r = task % reps;
    const GridPoint& g = grid[gi];
    RngStream rng(config.seed, stream_id_for(kChainFamily, gi, r));
    const auto z = rescaled_path(g.params, g.w0, config.horizon, config.grid_dt, rng, opts);
    const PathSample& ref = zeta[gi].path;
    double worst = 0.0;
    for (std::size_t k = 0; k < z.path.size(); ++k) {
      const double t = z.path.times()[k];
      worst = std::max(worst, std::abs(z.path.values()[k] - ref.value_at_or_before(t)));
    }
    sup_dev[gi][r] = worst;
    dev0[gi][r] = std::abs(z.path.values().front() - ref.values().front());
  });
  b.time("simulate", clock);

  std::vector<double> ps, medians;
  for (const auto& g : grid) {
    const double p = g.params.p();
    for (std::size_t r = 0; r < reps; ++r) b.row("replicate", p, r, "sup_deviation", sup_dev[g.index][r]);
    const double med = median(sup_dev[g.index]);
    b.row("distance", p, {}, "median_sup_deviation", med);
    b.row("distance", p, {}, "max_deviation_at_zero", *std::max_element(dev0[g.index].begin(), dev0[g.index].end()));
    b.row("distance", p, {}, "fluid_halving_error", zeta[g.index].halving_error);
    ps.push_back(p);
    medians.push_back(med);
  }
  const auto fit = fit_rate(ps, medians);
  b.row("rate", {}, {}, "slope", fit.slope);
  b.row("rate", {}, {}, "intercept", fit.intercept);
  b.row("rate", {}, {}, "r_squared", fit.r_squared);
  b.row("rate", {}, {}, "tau", grid.front().exponents.tau);
  b.within("rate_slope", fit.slope, config.thresholds.slope_min, config.thresholds.slope_max);
  b.at_least("rate_r_squared", fit.r_squared, config.thresholds.r2_min);
  const auto order = by_decreasing_p(config);
  for (std::size_t k = 1; k < order.size(); ++k) {
    // Strict decrease: the gap must be positive.
    const double gap = medians[order[k - 1]] - medians[order[k]];
    b.report.checks.push_back({"median_decreasing@p=" + format_double(config.p_grid[order[k]]), gap, ">", 0.0, 0.0,
                               gap > 0.0});
  }
  b.time("report", clock);
  return std::move(b.report);
}

ScenarioReport run_clt(const ExperimentConfig& config, const RunOptions& options) {
  validate_config(config);
  if (config.scenario != Scenario::clt) throw Error(ErrorCode::InvalidConfig, "scenario is not clt");
  Builder b;
  b.report.config = config;
  Clock clock;
  const auto grid = grid_points(config);
  const std::size_t reps = config.replicates;
  const std::size_t xi_reps = config.xi_replicates;
  const auto coeffs = FluidCoefficients::from(grid.front().params);
  const auto ou = ou_coefficients(grid.front().params);
  const double ou_var = ou_marginal_variance(ou, config.horizon);

  // zeta_p starts at c_p and therefore stays there; the limit path is the constant c0.
  std::vector<OdeSolution> zeta_p;
  for (const auto& g : grid) {
    zeta_p.push_back(solve_zeta(coeffs, equilibrium(g.params, g.params.p()), g.params.p(), config.horizon,
                                config.solver_dt));
  }
  const auto zeta0 = solve_zeta(coeffs, equilibrium(grid.front().params, 0.0), 0.0, config.horizon, config.solver_dt);
  const XiDriver driver(zeta0.path, grid.front().params);
  b.time("fluid", clock);

  std::vector<std::vector<double>> xi_end(grid.size(), std::vector<double>(reps));
  std::vector<std::vector<double>> xi_start(grid.size(), std::vector<double>(reps));
  std::vector<double> em(xi_reps);
  const RescaledPathOptions opts{config.loss_sampling, config.step_budget};
  detail::parallel_for(grid.size() * reps + xi_reps, options.threads, [&](std::size_t task) {
    if (task >= grid.size() * reps) {
      const std::size_t r = task - grid.size() * reps;
      RngStream rng(config.seed, stream_id_for(kXiFamily, 0, r));
      em[r] = driver.simulate(0.0, config.horizon, config.solver_dt, rng).back_value();
      return;
    }
    const std::size_t gi = task / reps, r = task % reps;
    const GridPoint& g = grid[gi];
    RngStream rng(config.seed, stream_id_for(kChainFamily, gi, r));
    const auto z = rescaled_path(g.params, g.w0, config.horizon, config.grid_dt, rng, opts);
    std::vector<double> zeta_on_grid;
    zeta_on_grid.reserve(z.path.size());
    for (double t : z.path.times()) zeta_on_grid.push_back(zeta_p[gi].path.value_at_or_before(t));
    const auto xi = fluctuation_path(g.params, PathSample(z.path.times(), std::move(zeta_on_grid)), z.path);
    xi_end[gi][r] = xi.back_value();
    xi_start[gi][r] = xi.values().front();
  });
  b.time("simulate", clock);

  const EmpiricalDistribution em_dist(em);
  const double em_var = sample_variance(em_dist);
  b.row("distance", {}, {}, "ou_marginal_variance", ou_var);
  b.row("distance", {}, {}, "em_variance_ratio", em_var / ou_var);
  b.row("distance", {}, {}, "em_ks_vs_ou", ks_vs_normal(em_dist, 0.0, ou_var));
  b.moments_rows(std::nullopt, "em", em_dist);
  std::vector<double> ratios(grid.size());
  for (const auto& g : grid) {
    const double p = g.params.p();
    for (std::size_t r = 0; r < reps; ++r) b.row("replicate", p, r, "xi_terminal", xi_end[g.index][r]);
    const EmpiricalDistribution d(xi_end[g.index]);
    ratios[g.index] = sample_variance(d) / ou_var;
    double start_max = 0.0;
    for (double v : xi_start[g.index]) start_max = std::max(start_max, std::abs(v));
    b.row("distance", p, {}, "variance_ratio", ratios[g.index]);
    b.row("distance", p, {}, "ks_vs_ou", ks_vs_normal(d, 0.0, ou_var));
    b.row("distance", p, {}, "ks_vs_em", ks_two_sample(d, em_dist));
    b.row("distance", p, {}, "max_abs_xi_at_zero", start_max);
    b.row("distance", p, {}, "zeta_p_halving_error", zeta_p[g.index].halving_error);
    b.moments_rows(p, "xi", d);
  }
  const double tol = config.thresholds.variance_rel_tol;
  const std::size_t last = smallest_p_index(config);
  b.within(at_p("variance_ratio", config.p_grid[last]), ratios[last], 1.0 - tol, 1.0 + tol);
  const double em_tol = config.thresholds.xi_variance_rel_tol;
  b.within("em_variance_ratio", em_var / ou_var, 1.0 - em_tol, 1.0 + em_tol);
  b.time("report", clock);
  return std::move(b.report);
}

ScenarioReport run_stationary_beta1(const ExperimentConfig& config, const RunOptions& options) {
  validate_config(config);
  if (config.scenario != Scenario::stationary_beta1) {
    throw Error(ErrorCode::InvalidConfig, "scenario is not stationary_beta1");
  }
  Builder b;
  b.report.config = config;
  Clock clock;
  const auto grid = grid_points(config);
  const std::uint64_t n = config.replicates;
  const std::uint64_t last_index = config.burn_in + (n - 1) * config.thin;
  require_budget(last_index, config.step_budget);

  // Per grid point: two chains on disjoint streams and one long limit run.
  std::vector<std::array<std::vector<double>, 3>> samples(grid.size());
  detail::parallel_for(grid.size() * 3, options.threads, [&](std::size_t task) {
    const std::size_t gi = task / 3, which = task % 3;
    const GridPoint& g = grid[gi];
    std::vector<double>& out = samples[gi][which];
    if (which < 2) {
      RngStream rng(config.seed, stream_id_for(kChainFamily, gi, which));
      const auto s = stationary_sample(g.params, g.w0, config.burn_in, n, config.thin, rng, config.loss_sampling);
      out = s.transformed([&](double w) { return g.scale * w; }).sorted_samples();
      return;
    }
    RngStream rng(config.seed, stream_id_for(kLimitFamily, gi, 0));
    PoissonLimitProcess proc(g.params, g.scale * g.w0, rng);
    const double dt = 1.0 / g.steps_per_unit;
    out.reserve(n);
    for (std::uint64_t j = 0; j < n; ++j) {
      proc.advance_to(static_cast<double>(config.burn_in + j * config.thin) * dt);
      out.push_back(proc.value());
    }
  });
  b.time("simulate", clock);

  std::vector<double> ks(grid.size()), ks_self(grid.size()), crit(grid.size());
  for (const auto& g : grid) {
    const double p = g.params.p();
    const EmpiricalDistribution a(samples[g.index][0]), c(samples[g.index][1]), l(samples[g.index][2]);
    ks[g.index] = ks_two_sample(a, l);
    ks_self[g.index] = ks_two_sample(a, c);
    crit[g.index] = ks_critical_value(a.size(), c.size(), 0.01);
    b.row("distance", p, {}, "ks", ks[g.index]);
    b.row("distance", p, {}, "w1", wasserstein1(a, l));
    b.row("distance", p, {}, "ks_chain_vs_chain", ks_self[g.index]);
    b.row("distance", p, {}, "ks_critical_1pct", crit[g.index]);
    b.moments_rows(p, "chain", a);
    b.moments_rows(p, "limit", l);
  }
  for (const auto& g : grid) {
    const double p = g.params.p();
    b.at_most(at_p("ks", p), ks[g.index], config.thresholds.ks_max);
    b.at_most(at_p("ks_chain_vs_chain", p), ks_self[g.index], crit[g.index]);
  }
  b.time("report", clock);
  return std::move(b.report);
}

ScenarioReport run_stationary_beta_lt1(const ExperimentConfig& config, const RunOptions& options) {
  validate_config(config);
  if (config.scenario != Scenario::stationary_beta_lt1) {
    throw Error(ErrorCode::InvalidConfig, "scenario is not stationary_beta_lt1");
  }
  Builder b;
  b.report.config = config;
  Clock clock;
  const auto grid = grid_points(config);
  const std::uint64_t n = config.replicates;
  require_budget(config.burn_in + (n - 1) * config.thin, config.step_budget);
  const auto law = ou_stationary_law(ou_coefficients(grid.front().params));

  std::vector<std::vector<double>> raw(grid.size());
  detail::parallel_for(grid.size(), options.threads, [&](std::size_t gi) {
    const GridPoint& g = grid[gi];
    RngStream rng(config.seed, stream_id_for(kChainFamily, gi, 0));
    raw[gi] = stationary_sample(g.params, g.w0, config.burn_in, n, config.thin, rng, config.loss_sampling)
                  .sorted_samples();
  });
  b.time("simulate", clock);

  b.row("distance", {}, {}, "ou_stationary_variance", law.variance);
  std::vector<double> ks(grid.size()), var_ratio(grid.size()), mean(grid.size());
  for (const auto& g : grid) {
    const double p = g.params.p();
    const double cp = equilibrium(g.params, p), c0 = equilibrium(g.params, 0.0);
    const double amp = std::pow(p, -g.exponents.tau);
    const EmpiricalDistribution w(raw[g.index]);
    const auto centered = w.transformed([&](double x) { return amp * (g.scale * x - cp); });
    const auto centered_c0 = w.transformed([&](double x) { return amp * (g.scale * x - c0); });
    ks[g.index] = ks_vs_normal(centered, 0.0, law.variance);
    var_ratio[g.index] = sample_variance(centered) / law.variance;
    mean[g.index] = sample_mean(centered);
    b.row("distance", p, {}, "ks_vs_normal", ks[g.index]);
    b.row("distance", p, {}, "variance_ratio", var_ratio[g.index]);
    b.row("distance", p, {}, "ks_vs_normal_c0_centering", ks_vs_normal(centered_c0, 0.0, law.variance));
    b.moments_rows(p, "scaled", centered);
    b.moments_rows(p, "scaled_c0", centered_c0);
  }
  const std::size_t last = smallest_p_index(config);
  const double p_last = config.p_grid[last];
  const double tol = config.thresholds.variance_rel_tol;
  b.at_most(at_p("ks_vs_normal", p_last), ks[last], config.thresholds.ks_max);
  b.within(at_p("variance_ratio", p_last), var_ratio[last], 1.0 - tol, 1.0 + tol);
  b.at_most(at_p("abs_mean", p_last), std::abs(mean[last]), config.thresholds.mean_abs_max);
  monotone_checks(b, config, ks, "ks_vs_normal");
  b.time("report", clock);
  return std::move(b.report);
}

ScenarioReport run_scenario(const ExperimentConfig& config, const RunOptions& options) {
  switch (config.scenario) {
    case Scenario::limit_beta1: return run_limit_beta1(config, options);
    case Scenario::lln: return run_lln(config, options);
    case Scenario::clt: return run_clt(config, options);
    case Scenario::stationary_beta1: return run_stationary_beta1(config, options);
    case Scenario::stationary_beta_lt1: return run_stationary_beta_lt1(config, options);
  }
  throw Error(ErrorCode::Internal, "unhandled scenario");
}

}  // namespace paradigm
