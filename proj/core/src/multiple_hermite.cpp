#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "pnglab/errors.hpp"
#include "pnglab/kernels.hpp"
#include "pnglab/special.hpp"

namespace pnglab::kernels {
namespace {

using cd = std::complex<double>;

void check_index(int k, const SourceSpec& src, const char* what, double x) {
  src.validate();
  if (k < 0 || k >= src.n) {
    throw DomainError(std::string(what) + ": index " + std::to_string(k) + " outside [0, " +
                      std::to_string(src.n - 1) + "]");
  }
  if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite argument");
}

double log_prefactor(int k) { return std::lgamma(k + 1.0) + 0.5 * k * std::log(2.0); }

}  // namespace

double mh_first(int k, const SourceSpec& src, double x) {
  check_index(k, src, "mh_first", x);
  std::vector<double> p(src.epsilons.begin(), src.epsilons.begin() + k + 1);
  for (double& v : p) v /= std::numbers::sqrt2;

  double sep = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t b = a + 1; b < p.size(); ++b) sep = std::min(sep, std::fabs(p[a] - p[b]));

  const double pref = std::exp(log_prefactor(k));
  if (sep >= 0.5) {
    double sum = 0.0;
    for (std::size_t m = 0; m < p.size(); ++m) {
      double den = 1.0;
      for (std::size_t l = 0; l < p.size(); ++l)
        if (l != m) den *= p[m] - p[l];
      sum += std::exp(-p[m] * p[m] / 2.0 + std::numbers::sqrt2 * p[m] * x) / den;
    }
    return pref * sum;
  }

  // clustered poles: trapezoid rule on a circle around them
  const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
  const double center = 0.5 * (*lo + *hi);
  const double radius = 0.5 * (*hi - *lo) + 0.5;
  const int m = 256;
  cd sum = 0.0;
  for (int j = 0; j < m; ++j) {
    const cd e = std::polar(1.0, 2.0 * std::numbers::pi * j / m);
    const cd z = center + radius * e;
    cd den = 1.0;
    for (double v : p) den *= z - v;
    sum += radius * e * std::exp(-z * z / 2.0 + std::numbers::sqrt2 * z * x) / den;
  }
  return pref * sum.real() / m;
}

double mh_second(int k, const SourceSpec& src, double x) {
  check_index(k, src, "mh_second", x);
  // On the line w = sqrt2 x + i s the Gaussian factor is exp(-s^2/2) and the
  // remaining factor is a polynomial of degree k in s.
  const auto gh = special::gauss_hermite(k + 1);
  double sum = 0.0;
  for (std::size_t n = 0; n < gh.size(); ++n) {
    const cd w(std::numbers::sqrt2 * x, std::numbers::sqrt2 * gh.nodes[n]);
    cd prod = 1.0;
    for (int l = 0; l < k; ++l) prod *= w - src.epsilons[l] / std::numbers::sqrt2;
    sum += gh.weights[n] * prod.real();
  }
  return std::pow(2.0, 0.5 * k) / std::sqrt(std::numbers::pi) * sum;
}

}  // namespace pnglab::kernels
