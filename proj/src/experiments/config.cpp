#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "paradigm/error.hpp"
#include "paradigm/experiments.hpp"

namespace paradigm {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw Error(ErrorCode::UnknownConfigKey, "unknown key '" + key + "' in " + where);
  }
}

double number(const json& j, const std::string& key) {
  if (!j.is_number()) bad("'" + key + "' must be a number");
  return j.get<double>();
}

std::uint64_t count(const json& j, const std::string& key) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    if (j.get<std::int64_t>() < 0) bad("'" + key + "' must be >= 0");
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  // Accept whole-valued floats such as 1e6.
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (v >= 0.0 && v == std::floor(v) && v < 0x1.0p63) return static_cast<std::uint64_t>(v);
  }
  bad("'" + key + "' must be a nonnegative integer");
}

StartPolicy parse_start(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "equilibrium") return {StartPolicy::Kind::equilibrium, 0.0};
    if (s == "limit_equilibrium") return {StartPolicy::Kind::limit_equilibrium, 0.0};
    bad("w0_policy must be \"equilibrium\", \"limit_equilibrium\", {\"scaled\": x} or {\"raw\": x}");
  }
  if (j.is_object() && j.size() == 1) {
    if (j.contains("scaled")) return {StartPolicy::Kind::scaled, number(j["scaled"], "w0_policy.scaled")};
    if (j.contains("raw")) return {StartPolicy::Kind::raw, number(j["raw"], "w0_policy.raw")};
  }
  bad("w0_policy must be \"equilibrium\", \"limit_equilibrium\", {\"scaled\": x} or {\"raw\": x}");
}

json start_to_json(const StartPolicy& s) {
  switch (s.kind) {
    case StartPolicy::Kind::equilibrium: return "equilibrium";
    case StartPolicy::Kind::limit_equilibrium: return "limit_equilibrium";
    case StartPolicy::Kind::scaled: return json{{"scaled", s.value}};
    case StartPolicy::Kind::raw: return json{{"raw", s.value}};
  }
  return nullptr;
}

void check_hypothesis(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::HypothesisViolated, what);
}

}  // namespace

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::limit_beta1: return "limit_beta1";
    case Scenario::lln: return "lln";
    case Scenario::clt: return "clt";
    case Scenario::stationary_beta1: return "stationary_beta1";
    case Scenario::stationary_beta_lt1: return "stationary_beta_lt1";
  }
  return "unknown";
}

Scenario scenario_from_string(std::string_view name) {
  for (Scenario s : {Scenario::limit_beta1, Scenario::lln, Scenario::clt, Scenario::stationary_beta1,
                     Scenario::stationary_beta_lt1}) {
    if (to_string(s) == name) return s;
  }
  bad("unknown scenario '" + std::string(name) + "'");
}

Thresholds default_thresholds(Scenario s) {
  Thresholds t;
  if (s == Scenario::stationary_beta_lt1) t.ks_max = 0.05;
  return t;
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) bad("config must be a JSON object");
  reject_unknown_keys(j,
                      {"scenario", "params", "w0_policy", "integer_w0", "horizon", "grid_dt", "replicates",
                       "xi_replicates", "seed", "solver_dt", "burn_in", "thin", "loss_sampling", "step_budget",
                       "output_path", "thresholds"},
                      "config");
  if (!j.contains("scenario") || !j["scenario"].is_string()) bad("'scenario' is required");
  if (!j.contains("params") || !j["params"].is_object()) bad("'params' object is required");

  ExperimentConfig c;
  c.scenario = scenario_from_string(j["scenario"].get<std::string>());
  c.thresholds = default_thresholds(c.scenario);

  const json& p = j["params"];
  reject_unknown_keys(p, {"c1", "c2", "alpha", "beta", "ell", "p"}, "params");
  for (const char* key : {"c1", "c2", "alpha", "beta", "ell", "p"}) {
    if (!p.contains(key)) bad(std::string("params.") + key + " is required");
  }
  c.params.c1 = number(p["c1"], "params.c1");
  c.params.c2 = number(p["c2"], "params.c2");
  c.params.alpha = number(p["alpha"], "params.alpha");
  c.params.beta = number(p["beta"], "params.beta");
  c.params.ell = number(p["ell"], "params.ell");
  if (p["p"].is_array()) {
    for (const auto& v : p["p"]) c.p_grid.push_back(number(v, "params.p[]"));
  } else {
    c.p_grid.push_back(number(p["p"], "params.p"));
  }
  if (c.p_grid.empty()) bad("params.p grid is empty");
  c.params.p = c.p_grid.front();

  if (j.contains("w0_policy")) c.w0 = parse_start(j["w0_policy"]);
  if (j.contains("integer_w0")) {
    if (!j["integer_w0"].is_boolean()) bad("'integer_w0' must be a boolean");
    c.integer_w0 = j["integer_w0"].get<bool>();
  }
  if (j.contains("horizon")) c.horizon = number(j["horizon"], "horizon");
  if (j.contains("grid_dt")) c.grid_dt = number(j["grid_dt"], "grid_dt");
  if (j.contains("replicates")) c.replicates = count(j["replicates"], "replicates");
  if (j.contains("xi_replicates")) c.xi_replicates = count(j["xi_replicates"], "xi_replicates");
  if (j.contains("seed")) c.seed = count(j["seed"], "seed");
  if (j.contains("solver_dt")) c.solver_dt = number(j["solver_dt"], "solver_dt");
  if (j.contains("burn_in")) c.burn_in = count(j["burn_in"], "burn_in");
  if (j.contains("thin")) c.thin = count(j["thin"], "thin");
  if (j.contains("step_budget")) c.step_budget = count(j["step_budget"], "step_budget");
  if (j.contains("loss_sampling")) {
    const auto& s = j["loss_sampling"];
    if (s == "per_step") {
      c.loss_sampling = LossSampling::per_step;
    } else if (s == "geometric") {
      c.loss_sampling = LossSampling::geometric;
    } else {
      bad("loss_sampling must be \"per_step\" or \"geometric\"");
    }
  }
  if (j.contains("output_path")) {
    if (!j["output_path"].is_string()) bad("'output_path' must be a string");
    c.output_path = j["output_path"].get<std::string>();
  }
  if (j.contains("thresholds")) {
    const json& t = j["thresholds"];
    if (!t.is_object()) bad("'thresholds' must be an object");
    reject_unknown_keys(t,
                        {"ks_max", "monotone_slack", "slope_min", "slope_max", "r2_min", "variance_rel_tol",
                         "xi_variance_rel_tol", "mean_abs_max"},
                        "thresholds");
    auto read = [&](const char* key, double& out) {
      if (t.contains(key)) out = number(t[key], std::string("thresholds.") + key);
    };
    read("ks_max", c.thresholds.ks_max);
    read("monotone_slack", c.thresholds.monotone_slack);
    read("slope_min", c.thresholds.slope_min);
    read("slope_max", c.thresholds.slope_max);
    read("r2_min", c.thresholds.r2_min);
    read("variance_rel_tol", c.thresholds.variance_rel_tol);
    read("xi_variance_rel_tol", c.thresholds.xi_variance_rel_tol);
    read("mean_abs_max", c.thresholds.mean_abs_max);
  }
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  json p = {{"c1", c.params.c1},       {"c2", c.params.c2},   {"alpha", c.params.alpha},
            {"beta", c.params.beta},   {"ell", c.params.ell}, {"p", c.p_grid}};
  const Thresholds& t = c.thresholds;
  json thresholds = {{"ks_max", t.ks_max},
                     {"monotone_slack", t.monotone_slack},
                     {"slope_min", t.slope_min},
                     {"slope_max", t.slope_max},
                     {"r2_min", t.r2_min},
                     {"variance_rel_tol", t.variance_rel_tol},
                     {"xi_variance_rel_tol", t.xi_variance_rel_tol},
                     {"mean_abs_max", t.mean_abs_max}};
  return {{"scenario", std::string(to_string(c.scenario))},
          {"params", p},
          {"w0_policy", start_to_json(c.w0)},
          {"integer_w0", c.integer_w0},
          {"horizon", c.horizon},
          {"grid_dt", c.grid_dt},
          {"replicates", c.replicates},
          {"xi_replicates", c.xi_replicates},
          {"seed", c.seed},
          {"solver_dt", c.solver_dt},
          {"burn_in", c.burn_in},
          {"thin", c.thin},
          {"loss_sampling", c.loss_sampling == LossSampling::per_step ? "per_step" : "geometric"},
          {"step_budget", c.step_budget},
          {"output_path", c.output_path},
          {"thresholds", thresholds}};
}

void validate_config(const ExperimentConfig& c) {
  if (c.p_grid.empty()) bad("p grid is empty");
  for (double p : c.p_grid) {
    RawParams raw = c.params;
    raw.p = p;
    validate(raw);  // throws the specific parameter error
  }
  {
    std::set<double> distinct(c.p_grid.begin(), c.p_grid.end());
    if (distinct.size() != c.p_grid.size()) bad("p grid has duplicate values");
  }
  if (c.p_grid.size() >= (1u << 16)) bad("p grid too long");
  if (!(c.horizon > 0.0) || !std::isfinite(c.horizon)) bad("horizon must be > 0");
  if (!(c.grid_dt > 0.0) || !std::isfinite(c.grid_dt)) bad("grid_dt must be > 0");
  if (!(c.solver_dt > 0.0) || !std::isfinite(c.solver_dt)) bad("solver_dt must be > 0");
  if (c.thin < 1) bad("thin must be >= 1");
  if (c.replicates < 2) throw Error(ErrorCode::TooFewReplicates, "replicates must be >= 2");
  if (c.replicates >= (1ull << 32)) bad("replicates must be < 2^32");
  if (c.xi_replicates >= (1ull << 32)) bad("xi_replicates must be < 2^32");
  if ((c.w0.kind == StartPolicy::Kind::scaled || c.w0.kind == StartPolicy::Kind::raw) &&
      (!(c.w0.value > 0.0) || !std::isfinite(c.w0.value))) {
    bad("explicit w0 must be finite and > 0");
  }

  const bool beta_one = c.params.beta == 1.0;
  switch (c.scenario) {
    case Scenario::limit_beta1:
      check_hypothesis(beta_one, "limit_beta1 requires beta = 1");
      break;
    case Scenario::lln:
      check_hypothesis(!beta_one, "lln requires beta < 1");
      if (c.p_grid.size() < 3) bad("lln needs at least three p values for the rate fit");
      break;
    case Scenario::clt:
      check_hypothesis(!beta_one, "clt requires beta < 1");
      check_hypothesis(c.w0.kind == StartPolicy::Kind::equilibrium, "clt requires w0_policy \"equilibrium\"");
      if (c.xi_replicates < 2) throw Error(ErrorCode::TooFewReplicates, "xi_replicates must be >= 2");
      break;
    case Scenario::stationary_beta1:
      check_hypothesis(beta_one, "stationary_beta1 requires beta = 1");
      check_hypothesis(c.params.ell > 0.0, "stationary_beta1 requires ell > 0");
      break;
    case Scenario::stationary_beta_lt1:
      check_hypothesis(!beta_one, "stationary_beta_lt1 requires beta < 1");
      break;
  }
}

double starting_window(const ExperimentConfig& c, const ModelParams& params) {
  const double gamma = derive_exponents(params).gamma;
  const double inv_scale = std::pow(params.p(), -gamma);
  double w0 = 0.0;
  switch (c.w0.kind) {
    case StartPolicy::Kind::equilibrium: w0 = equilibrium(params, params.p()) * inv_scale; break;
    case StartPolicy::Kind::limit_equilibrium: w0 = equilibrium(params, 0.0) * inv_scale; break;
    case StartPolicy::Kind::scaled: w0 = c.w0.value * inv_scale; break;
    case StartPolicy::Kind::raw: w0 = c.w0.value; break;
  }
  if (c.integer_w0) w0 = std::round(w0);
  return std::max(w0, params.ell());
}

json derived_quantities(const ExperimentConfig& c) {
  json out = json::array();
  for (double p : c.p_grid) {
    RawParams raw = c.params;
    raw.p = p;
    const ModelParams m(raw);
    const auto e = derive_exponents(m);
    json row = {{"p", p},
                {"gamma", e.gamma},
                {"nu", e.nu},
                {"tau", e.tau},
                {"c_p", equilibrium(m, p)},
                {"c0", equilibrium(m, 0.0)},
                {"steps_per_unit_time", std::pow(p, -e.nu)},
                {"w0", starting_window(c, m)}};
    if (!m.beta_is_one()) {
      const auto ou = ou_coefficients(m);
      row["mu"] = ou.mu;
      row["sigma"] = ou.sigma;
      row["stationary_variance"] = ou.stationary_variance;
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace paradigm
