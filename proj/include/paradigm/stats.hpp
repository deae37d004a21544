#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace paradigm {

/// Sorted sample set. Nonempty, all values finite.
class EmpiricalDistribution {
 public:
  /// Sorts the input. Throws EmptySample if empty, InvalidArgument on non-finite values.
  explicit EmpiricalDistribution(std::vector<double> samples);

  std::size_t size() const noexcept { return sorted_.size(); }
  const std::vector<double>& sorted_samples() const noexcept { return sorted_; }
  double min() const { return sorted_.front(); }
  double max() const { return sorted_.back(); }

  /// Fraction of samples <= x.
  double cdf(double x) const;

  /// Applies f to every sample and re-sorts.
  EmpiricalDistribution transformed(const std::function<double(double)>& f) const;

  bool operator==(const EmpiricalDistribution&) const = default;

 private:
  std::vector<double> sorted_;
};

/// sup_x |F_a(x) - F_b(x)| by a merged sweep over both sorted samples.
double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// Standard normal CDF through std::erfc.
double normal_cdf(double x, double mean = 0.0, double variance = 1.0);

/// One-sample KS statistic against Normal(mean, variance).
double ks_vs_normal(const EmpiricalDistribution& a, double mean, double variance);

/// Exact W1 between equal-size empirical laws: mean |a_(i) - b_(i)|.
double wasserstein1(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// Asymptotic two-sample KS critical value c(level) sqrt((n + m) / (n m)).
/// Supported levels: 0.10, 0.05, 0.01, 0.001.
double ks_critical_value(std::size_t n, std::size_t m, double level);

struct Moments {
  double mean;
  double variance;         // unbiased
  double skewness;         // m3 / m2^{3/2}, central moments about the mean
  double excess_kurtosis;  // m4 / m2^2 - 3
};

double sample_mean(const EmpiricalDistribution& a);
/// Unbiased; needs n >= 2.
double sample_variance(const EmpiricalDistribution& a);
/// Throws DegenerateSample when the sample has zero spread.
double sample_skewness(const EmpiricalDistribution& a);
double sample_excess_kurtosis(const EmpiricalDistribution& a);
/// All four at once; throws DegenerateSample for constant samples.
Moments moments(const EmpiricalDistribution& a);

struct RateFit {
  double slope;
  double intercept;
  double r_squared;
};

/// Least squares line through (log x, log y).
RateFit fit_rate(std::span<const double> xs, std::span<const double> ys);

double median(std::vector<double> values);

}  // namespace paradigm
