#pragma once

#include <functional>
#include <memory>
#include <vector>

namespace pnglab {

/// Right-continuous empirical distribution function of a sample.
class EmpiricalCdf {
 public:
  /// Throws ConfigurationError on an empty sample, DomainError on NaN.
  explicit EmpiricalCdf(std::vector<double> samples);

  std::size_t n() const noexcept { return samples_.size(); }
  const std::vector<double>& samples() const noexcept { return samples_; }

  /// #samples <= x, divided by n.
  double operator()(double x) const;
  /// #samples < x, divided by n.
  double left_limit(double x) const;

 private:
  std::vector<double> samples_;
};

EmpiricalCdf empirical_cdf(std::vector<double> samples);

/// Kolmogorov-Smirnov distance sup_x |F_hat(x) - cdf(x)|, taken over both
/// one-sided limits at every sample point (exact for continuous cdfs and for
/// step cdfs jumping only at sample points).
double ks_distance(const EmpiricalCdf& ecdf, const std::function<double(double)>& cdf);

/// Fraction of sample vectors with every component <= the matching threshold.
double joint_ecdf(const std::vector<std::vector<double>>& samples, const std::vector<double>& thresholds);

/// Monotone piecewise-cubic (PCHIP) interpolant of a tabulated distribution
/// function; 0 below and 1 above the table, or the end values when clamped
/// is false.
class TabulatedCdf {
 public:
  TabulatedCdf(std::vector<double> x, std::vector<double> f, bool clamp_to_unit = true);
  double operator()(double s) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Tabulates cdf on lo:hi:step and returns the interpolant.
TabulatedCdf tabulate_cdf(const std::function<double(double)>& cdf, double lo, double hi, double step);

}  // namespace pnglab
