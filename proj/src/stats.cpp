#include "paradigm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "paradigm/error.hpp"

namespace paradigm {

namespace {

void require_nonempty(const EmpiricalDistribution& a) {
  if (a.size() == 0) throw Error(ErrorCode::EmptySample, "empty sample");
}

struct CentralSums {
  double mean;
  double m2;  // population central moments
  double m3;
  double m4;
};

CentralSums central_sums(const EmpiricalDistribution& a) {
  const auto& xs = a.sorted_samples();
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;
  double s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    const double d2 = d * d;
    s2 += d2;
    s3 += d2 * d;
    s4 += d2 * d2;
  }
  return {mean, s2 / n, s3 / n, s4 / n};
}

}  // namespace

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw Error(ErrorCode::EmptySample, "empirical distribution needs at least one sample");
  for (double x : sorted_) {
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "samples must be finite");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::cdf(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(std::distance(sorted_.begin(), it)) / static_cast<double>(sorted_.size());
}

EmpiricalDistribution EmpiricalDistribution::transformed(const std::function<double(double)>& f) const {
  std::vector<double> out;
  out.reserve(sorted_.size());
  for (double x : sorted_) out.push_back(f(x));
  return EmpiricalDistribution(std::move(out));
}

double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  require_nonempty(a);
  require_nonempty(b);
  const auto& xs = a.sorted_samples();
  const auto& ys = b.sorted_samples();
  const double n = static_cast<double>(xs.size());
  const double m = static_cast<double>(ys.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  // Advance past every copy of the smallest pending value before comparing,
  // so ties between the samples are handled as a single breakpoint.
  while (i < xs.size() && j < ys.size()) {
    const double v = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] == v) ++i;
    while (j < ys.size() && ys[j] == v) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return best;
}

double normal_cdf(double x, double mean, double variance) {
  const double z = (x - mean) / std::sqrt(variance);
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double ks_vs_normal(const EmpiricalDistribution& a, double mean, double variance) {
  require_nonempty(a);
  if (!(variance > 0.0)) throw Error(ErrorCode::InvalidArgument, "variance must be > 0");
  const auto& xs = a.sorted_samples();
  const double n = static_cast<double>(xs.size());
  double best = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = normal_cdf(xs[i], mean, variance);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    best = std::max({best, above, below});
  }
  return best;
}

double wasserstein1(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  require_nonempty(a);
  require_nonempty(b);
  if (a.size() != b.size()) throw Error(ErrorCode::SizeMismatch, "wasserstein1 needs equal sample counts");
  const auto& xs = a.sorted_samples();
  const auto& ys = b.sorted_samples();
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) total += std::abs(xs[i] - ys[i]);
  return total / static_cast<double>(xs.size());
}

double ks_critical_value(std::size_t n, std::size_t m, double level) {
  double c = 0.0;
  if (level == 0.10) {
    c = 1.224;
  } else if (level == 0.05) {
    c = 1.358;
  } else if (level == 0.01) {
    c = 1.628;
  } else if (level == 0.001) {
    c = 1.949;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unsupported KS significance level");
  }
  if (n == 0 || m == 0) throw Error(ErrorCode::EmptySample, "KS critical value needs nonempty samples");
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  return c * std::sqrt((nn + mm) / (nn * mm));
}

double sample_mean(const EmpiricalDistribution& a) {
  require_nonempty(a);
  return central_sums(a).mean;
}

double sample_variance(const EmpiricalDistribution& a) {
  if (a.size() < 2) throw Error(ErrorCode::TooFewPoints, "variance needs at least two samples");
  const double n = static_cast<double>(a.size());
  return central_sums(a).m2 * n / (n - 1.0);
}

double sample_skewness(const EmpiricalDistribution& a) {
  const CentralSums s = central_sums(a);
  if (!(s.m2 > 0.0)) throw Error(ErrorCode::DegenerateSample, "skewness undefined for zero spread");
  return s.m3 / std::pow(s.m2, 1.5);
}

double sample_excess_kurtosis(const EmpiricalDistribution& a) {
  const CentralSums s = central_sums(a);
  if (!(s.m2 > 0.0)) throw Error(ErrorCode::DegenerateSample, "kurtosis undefined for zero spread");
  return s.m4 / (s.m2 * s.m2) - 3.0;
}

Moments moments(const EmpiricalDistribution& a) {
  if (a.size() < 2) throw Error(ErrorCode::TooFewPoints, "moments need at least two samples");
  const CentralSums s = central_sums(a);
  if (!(s.m2 > 0.0)) throw Error(ErrorCode::DegenerateSample, "constant sample");
  const double n = static_cast<double>(a.size());
  return {s.mean, s.m2 * n / (n - 1.0), s.m3 / std::pow(s.m2, 1.5), s.m4 / (s.m2 * s.m2) - 3.0};
}

RateFit fit_rate(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorCode::SizeMismatch, "fit_rate needs paired points");
  if (xs.size() < 3) throw Error(ErrorCode::TooFewPoints, "fit_rate needs at least three points");
  std::vector<double> lx, ly;
  lx.reserve(xs.size());
  ly.reserve(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
      throw Error(ErrorCode::NonPositiveValue, "fit_rate needs strictly positive values");
    }
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(ys[i]));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double dx = lx[i] - mx, dy = ly[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::DegenerateSample, "fit_rate needs distinct x values");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (intercept + slope * lx[i]);
    ss_res += r * r;
  }
  const double r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return {slope, intercept, r2};
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptySample, "median of nothing");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace paradigm
