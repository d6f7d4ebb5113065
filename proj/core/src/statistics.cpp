#include "pnglab/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <math.h>  // boost 1.74 pchip calls isnan unqualified

#include <boost/math/interpolators/pchip.hpp>

#include "pnglab/errors.hpp"

namespace pnglab {

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw ConfigurationError("empirical cdf: empty sample");
  for (double v : samples_) {
    if (std::isnan(v)) throw DomainError("empirical cdf: NaN sample");
  }
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalCdf::operator()(double x) const {
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalCdf::left_limit(double x) const {
  const auto it = std::lower_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

EmpiricalCdf empirical_cdf(std::vector<double> samples) { return EmpiricalCdf(std::move(samples)); }

double ks_distance(const EmpiricalCdf& ecdf, const std::function<double(double)>& cdf) {
  const auto& s = ecdf.samples();
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t j = i;
    while (j < s.size() && s[j] == s[i]) ++j;
    const double f = cdf(s[i]);
    const double f_left = cdf(std::nextafter(s[i], -std::numeric_limits<double>::infinity()));
    d = std::max({d, std::fabs(static_cast<double>(j) / n - f), std::fabs(static_cast<double>(i) / n - f_left)});
    i = j;
  }
  return std::min(d, 1.0);
}

double joint_ecdf(const std::vector<std::vector<double>>& samples, const std::vector<double>& thresholds) {
  if (samples.empty()) throw ConfigurationError("joint ecdf: empty sample");
  std::size_t hits = 0;
  for (const auto& v : samples) {
    if (v.size() != thresholds.size()) throw ConfigurationError("joint ecdf: dimension mismatch");
    bool all = true;
    for (std::size_t k = 0; k < v.size() && all; ++k) all = v[k] <= thresholds[k];
    hits += all ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

struct TabulatedCdf::Impl {
  double lo, hi, f_lo, f_hi;
  bool clamp;
  boost::math::interpolators::pchip<std::vector<double>> interp;
};

TabulatedCdf::TabulatedCdf(std::vector<double> x, std::vector<double> f, bool clamp_to_unit) {
  if (x.size() != f.size() || x.size() < 4) throw ConfigurationError("tabulated cdf: need at least 4 points");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw ConfigurationError("tabulated cdf: abscissae must increase");
  }
  const double lo = x.front(), hi = x.back(), flo = f.front(), fhi = f.back();
  impl_ = std::make_shared<const Impl>(
      Impl{lo, hi, flo, fhi, clamp_to_unit, boost::math::interpolators::pchip(std::move(x), std::move(f))});
}

double TabulatedCdf::operator()(double s) const {
  const Impl& m = *impl_;
  if (s <= m.lo) return m.clamp ? 0.0 : m.f_lo;
  if (s >= m.hi) return m.clamp ? 1.0 : m.f_hi;
  return std::clamp(m.interp(s), 0.0, 1.0);
}

TabulatedCdf tabulate_cdf(const std::function<double(double)>& cdf, double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi > lo)) throw ConfigurationError("tabulate_cdf: invalid grid");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> x(n), f(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = lo + static_cast<double>(i) * step;
    f[i] = cdf(x[i]);
  }
  return TabulatedCdf(std::move(x), std::move(f));
}

}  // namespace pnglab
