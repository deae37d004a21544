#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "paradigm/chain.hpp"
#include "paradigm/params.hpp"

namespace paradigm {

inline constexpr std::string_view kLibraryVersion = "0.1.0";

enum class Scenario { limit_beta1, lln, clt, stationary_beta1, stationary_beta_lt1 };

std::string_view to_string(Scenario s);
Scenario scenario_from_string(std::string_view name);

/// Where the chain starts, per p-grid point.
struct StartPolicy {
  enum class Kind {
    equilibrium,        // w0 = c_p p^-gamma
    limit_equilibrium,  // w0 = c0 p^-gamma
    scaled,             // w0 = value p^-gamma, i.e. Z_p(0) = value
    raw,                // w0 = value
  };
  Kind kind = Kind::equilibrium;
  double value = 0.0;

  bool operator==(const StartPolicy&) const = default;
};

/// Acceptance thresholds. Every scenario reads the subset it needs.
struct Thresholds {
  double ks_max = 0.10;
  double monotone_slack = 0.02;
  double slope_min = 0.35;
  double slope_max = 0.65;
  double r2_min = 0.9;
  double variance_rel_tol = 0.15;
  double xi_variance_rel_tol = 0.05;
  double mean_abs_max = 0.1;

  bool operator==(const Thresholds&) const = default;
};

Thresholds default_thresholds(Scenario s);

struct ExperimentConfig {
  Scenario scenario = Scenario::limit_beta1;
  RawParams params;             // params.p is ignored; the grid below is used
  std::vector<double> p_grid;   // at least one value
  StartPolicy w0;
  bool integer_w0 = false;      // round the starting window to an integer
  double horizon = 10.0;        // rescaled time
  double grid_dt = 0.1;
  std::uint64_t replicates = 1000;  // replicate paths, or samples for stationary scenarios
  std::uint64_t xi_replicates = 10000;
  std::uint64_t seed = 1;
  double solver_dt = 1e-3;
  std::uint64_t burn_in = 0;    // chain steps
  std::uint64_t thin = 1;       // chain steps
  LossSampling loss_sampling = LossSampling::per_step;
  std::uint64_t step_budget = 1'000'000'000'000ULL;
  std::string output_path = "out";
  Thresholds thresholds;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Strict JSON parsing: unknown keys raise UnknownConfigKey, malformed values
/// InvalidConfig, and scenario hypotheses are checked (see validate_config).
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Full echo with every default resolved; parse_config(to_json(c)) == c.
nlohmann::json to_json(const ExperimentConfig& config);

/// Scenario hypotheses and numeric sanity. Throws Error with a config code.
void validate_config(const ExperimentConfig& config);

/// Raw starting window for one grid point.
double starting_window(const ExperimentConfig& config, const ModelParams& params);

struct MetricRow {
  std::string family;                      // distance, moment, rate, replicate
  std::optional<double> p;                 // empty for cross-grid aggregates
  std::optional<std::uint64_t> replicate;  // empty for aggregates
  std::string metric;
  double value;
};

struct Check {
  std::string name;
  double value;
  std::string comparator;  // "<=", ">=", "in"
  double threshold;
  double threshold_hi;     // upper bound for "in"
  bool pass;
};

struct ScenarioReport {
  ExperimentConfig config;
  std::vector<MetricRow> rows;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, double>> timings_seconds;

  bool pass() const;
};

struct RunOptions {
  unsigned threads = 1;
};

ScenarioReport run_limit_beta1(const ExperimentConfig& config, const RunOptions& options = {});
ScenarioReport run_lln(const ExperimentConfig& config, const RunOptions& options = {});
ScenarioReport run_clt(const ExperimentConfig& config, const RunOptions& options = {});
ScenarioReport run_stationary_beta1(const ExperimentConfig& config, const RunOptions& options = {});
ScenarioReport run_stationary_beta_lt1(const ExperimentConfig& config, const RunOptions& options = {});

ScenarioReport run_scenario(const ExperimentConfig& config, const RunOptions& options = {});

/// The deterministic part of the report (no timings).
nlohmann::json report_json(const ScenarioReport& report);

/// Writes report.json, one CSV per metric family, and timings.json. Everything
/// except timings.json is a pure function of (config, seed).
void write_report(const ScenarioReport& report, const std::filesystem::path& dir);

/// Shortest round-trip decimal text for a double.
std::string format_double(double x);

/// Derived quantities for the params subcommand.
nlohmann::json derived_quantities(const ExperimentConfig& config);

}  // namespace paradigm
