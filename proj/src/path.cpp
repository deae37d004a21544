#include "paradigm/path.hpp"

#include <algorithm>
#include <cmath>

#include "paradigm/error.hpp"

namespace paradigm {

PathSample::PathSample(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() != values_.size()) {
    throw Error(ErrorCode::InvalidArgument, "path times and values differ in length");
  }
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "path times must be strictly increasing");
    }
  }
}

double PathSample::value_at_or_before(double t) const {
  if (times_.empty()) throw Error(ErrorCode::EmptySample, "empty path");
  const double slack = 1e-9 * std::max(1.0, std::abs(t));
  auto it = std::upper_bound(times_.begin(), times_.end(), t + slack);
  if (it == times_.begin()) {
    throw Error(ErrorCode::InvalidArgument, "time precedes the start of the path");
  }
  return values_[static_cast<std::size_t>(std::distance(times_.begin(), it)) - 1];
}

bool PathSample::same_grid(const PathSample& other) const {
  if (times_.size() != other.times_.size()) return false;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    const double a = times_[i], b = other.times_[i];
    if (std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)})) return false;
  }
  return true;
}

std::vector<double> make_time_grid(double horizon, double dt) {
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw Error(ErrorCode::InvalidArgument, "horizon must be finite and >= 0");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "grid dt must be > 0");

  std::vector<double> grid;
  const double ratio = horizon / dt;
  const double whole = std::round(ratio);
  const bool aligned = std::abs(ratio - whole) <= 1e-9 * std::max(1.0, ratio);
  const auto n = static_cast<std::size_t>(aligned ? whole : std::floor(ratio));
  grid.reserve(n + 2);
  for (std::size_t k = 0; k <= n; ++k) grid.push_back(static_cast<double>(k) * dt);
  if (aligned) {
    grid.back() = horizon;
  } else {
    grid.push_back(horizon);
  }
  return grid;
}

}  // namespace paradigm
