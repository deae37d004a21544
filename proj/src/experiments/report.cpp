#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "paradigm/error.hpp"
#include "paradigm/experiments.hpp"

namespace paradigm {

using nlohmann::json;

namespace {

constexpr const char* kFamilies[] = {"distance", "moment", "rate", "replicate"};

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::InvalidArgument, "write failed for " + path.string());
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

json report_json(const ScenarioReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    json entry = {{"name", c.name},
                  {"value", number_or_null(c.value)},
                  {"comparator", c.comparator},
                  {"threshold", number_or_null(c.threshold)},
                  {"pass", c.pass}};
    if (c.comparator == "in") {
      entry["threshold"] = json::array({number_or_null(c.threshold), number_or_null(c.threshold_hi)});
    }
    checks.push_back(entry);
  }

  // Aggregates grouped by p; per-replicate values live in replicate.csv only.
  json per_p = json::array();
  for (double p : report.config.p_grid) {
    json metrics = json::object();
    for (const auto& r : report.rows) {
      if (r.family == "replicate" || !r.p || *r.p != p) continue;
      metrics[r.family][r.metric] = number_or_null(r.value);
    }
    per_p.push_back({{"p", p}, {"metrics", metrics}});
  }
  json aggregate = json::object();
  for (const auto& r : report.rows) {
    if (r.family == "replicate" || r.p) continue;
    aggregate[r.family][r.metric] = number_or_null(r.value);
  }

  return {{"library_version", std::string(kLibraryVersion)},
          {"scenario", std::string(to_string(report.config.scenario))},
          {"seed", report.config.seed},
          {"config", to_json(report.config)},
          {"derived", derived_quantities(report.config)},
          {"per_p", per_p},
          {"aggregate", aggregate},
          {"checks", checks},
          {"pass", report.pass()}};
}

void write_report(const ScenarioReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::InvalidArgument, "cannot create " + dir.string() + ": " + ec.message());

  const std::string scenario(to_string(report.config.scenario));
  std::map<std::string, std::string> csv;
  for (const char* f : kFamilies) csv[f] = "scenario,p,replicate,metric,value\n";
  for (const auto& r : report.rows) {
    auto it = csv.find(r.family);
    if (it == csv.end()) throw Error(ErrorCode::Internal, "unknown metric family " + r.family);
    it->second += scenario + ',' + (r.p ? format_double(*r.p) : "all") + ',' +
                  (r.replicate ? std::to_string(*r.replicate) : "aggregate") + ',' + r.metric + ',' +
                  format_double(r.value) + '\n';
  }
  for (const auto& [family, text] : csv) write_text(dir / (family + ".csv"), text);
  write_text(dir / "report.json", report_json(report).dump(2) + '\n');

  json timings = json::object();
  for (const auto& [what, seconds] : report.timings_seconds) timings[what] = seconds;
  write_text(dir / "timings.json", json{{"wall_clock_seconds", timings}}.dump(2) + '\n');
}

}  // namespace paradigm
