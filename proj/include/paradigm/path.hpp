#pragma once

#include <cstddef>
#include <vector>

namespace paradigm {

/// A trajectory sampled on a strictly increasing time grid.
class PathSample {
 public:
  PathSample() = default;
  /// Throws InvalidArgument on length mismatch or a non-increasing grid.
  PathSample(std::vector<double> times, std::vector<double> values);

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }

  double back_time() const { return times_.back(); }
  double back_value() const { return values_.back(); }

  /// Value at the last grid point <= t (right-continuous step reading).
  /// Grid points within 1e-9 relative of t count as <= t.
  double value_at_or_before(double t) const;

  /// True when both grids agree pointwise to 1e-12 relative.
  bool same_grid(const PathSample& other) const;

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

/// 0, dt, 2 dt, ..., horizon. When horizon is not a multiple of dt the grid
/// ends with an extra point exactly at horizon.
std::vector<double> make_time_grid(double horizon, double dt);

}  // namespace paradigm
