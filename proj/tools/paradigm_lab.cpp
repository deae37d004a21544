#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "paradigm/error.hpp"
#include "paradigm/experiments.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitThresholdFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

bool is_config_error(paradigm::ErrorCode code) {
  using paradigm::ErrorCode;
  switch (code) {
    case ErrorCode::NonFiniteParameter:
    case ErrorCode::NonPositiveC1:
    case ErrorCode::NonPositiveC2:
    case ErrorCode::AlphaNotBelowBeta:
    case ErrorCode::BetaAboveOne:
    case ErrorCode::NegativeFloor:
    case ErrorCode::BetaOneRequiresC2LessThanOne:
    case ErrorCode::BetaBelowOneRequiresPositiveFloor:
    case ErrorCode::POutOfRange:
    case ErrorCode::BetaMustBeBelowOne:
    case ErrorCode::BetaMustBeOne:
    case ErrorCode::CoefficientOutOfRange:
    case ErrorCode::HorizonTooLarge:
    case ErrorCode::InvalidConfig:
    case ErrorCode::UnknownConfigKey:
    case ErrorCode::TooFewReplicates:
    case ErrorCode::HypothesisViolated:
      return true;
    default:
      return false;
  }
}

unsigned threads_from_env() {
  const char* env = std::getenv("PARADIGM_LAB_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    std::size_t used = 0;
    const long v = std::stol(env, &used);
    if (used == std::string(env).size() && v >= 1 && v <= 1024) return static_cast<unsigned>(v);
  } catch (const std::exception&) {
  }
  throw paradigm::Error(paradigm::ErrorCode::InvalidConfig,
                        std::string("PARADIGM_LAB_THREADS must be an integer in [1, 1024], got '") + env + "'");
}

void print_checks(const paradigm::ScenarioReport& report) {
  for (const auto& c : report.checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " = " << paradigm::format_double(c.value) << ' '
              << c.comparator << ' ';
    if (c.comparator == "in") {
      std::cout << '[' << paradigm::format_double(c.threshold) << ", " << paradigm::format_double(c.threshold_hi)
                << ']';
    } else {
      std::cout << paradigm::format_double(c.threshold);
    }
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification lab for the generalized congestion-avoidance chain"};
  app.set_version_flag("--version", std::string(paradigm::kLibraryVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> out_dir;

  auto* run = app.add_subcommand("run", "Run the scenario and write CSV/JSON reports");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--threads", threads, "Worker threads (default: PARADIGM_LAB_THREADS or 1)")
      ->check(CLI::Range(1u, 1024u));
  run->add_option("--out", out_dir, "Output directory (default: output_path from the config)");

  auto* validate = app.add_subcommand("validate", "Parse and check a config without running it");
  validate->add_option("config", config_path, "Experiment config (JSON)")->required();

  auto* params = app.add_subcommand("params", "Print derived exponents and coefficients");
  params->add_option("config", config_path, "Experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfigError;
  }

  try {
    auto config = paradigm::load_config(config_path);
    if (validate->parsed()) {
      std::cout << paradigm::to_json(config).dump(2) << '\n';
      return kExitPass;
    }
    if (params->parsed()) {
      std::cout << paradigm::derived_quantities(config).dump(2) << '\n';
      return kExitPass;
    }
    if (seed) config.seed = *seed;
    // --out redirects the files only; the echoed config keeps its own output_path.
    const std::string destination = out_dir ? *out_dir : config.output_path;
    paradigm::RunOptions options;
    options.threads = threads ? *threads : threads_from_env();

    const auto report = paradigm::run_scenario(config, options);
    paradigm::write_report(report, destination);
    print_checks(report);
    std::cout << (report.pass() ? "PASS" : "FAIL") << ' ' << paradigm::to_string(config.scenario) << " -> "
              << destination << '\n';
    return report.pass() ? kExitPass : kExitThresholdFailure;
  } catch (const paradigm::Error& e) {
    std::cerr << "paradigm-lab: " << e.what() << '\n';
    return is_config_error(e.code()) ? kExitConfigError : kExitRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "paradigm-lab: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}
