#include "pnglab/rmt.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "pnglab/errors.hpp"

namespace pnglab {

void TimeGrid::validate() const {
  if (times.empty()) throw ConfigurationError("TimeGrid: empty");
  if (times.front() != 0.0) throw ConfigurationError("TimeGrid: first time must be 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1]) || !std::isfinite(times[i])) {
      throw ConfigurationError("TimeGrid: times must be strictly increasing and finite");
    }
  }
}

namespace rmt {
namespace {

using cd = std::complex<double>;

void require_size(int n) {
  if (n < 1) throw ConfigurationError("matrix size must be >= 1");
}

void check_source(int n, const SourceSpec& src) {
  src.validate();
  if (src.n != n) {
    throw ConfigurationError("source has " + std::to_string(src.n) + " entries, matrix size is " + std::to_string(n));
  }
}

double chi(double k, Rng& rng) {
  if (k <= 0.0) return 0.0;
  return std::sqrt(std::chi_squared_distribution<double>(k)(rng));
}

}  // namespace

HermitianMatrix sample_gue(int n, Rng& rng) {
  require_size(n);
  std::normal_distribution<double> diag(0.0, std::sqrt(0.5)), off(0.0, 0.5);
  HermitianMatrix m{Eigen::MatrixXcd(n, n)};
  for (int j = 0; j < n; ++j) {
    m.entries(j, j) = diag(rng);
    for (int i = j + 1; i < n; ++i) {
      const double re = off(rng);
      const double im = off(rng);
      m.entries(i, j) = cd(re, im);
      m.entries(j, i) = cd(re, -im);
    }
  }
  return m;
}

Eigen::MatrixXd sample_goe(int n, Rng& rng) {
  require_size(n);
  std::normal_distribution<double> diag(0.0, 1.0), off(0.0, std::sqrt(0.5));
  Eigen::MatrixXd m(n, n);
  for (int j = 0; j < n; ++j) {
    m(j, j) = diag(rng);
    for (int i = j + 1; i < n; ++i) m(i, j) = m(j, i) = off(rng);
  }
  return m;
}

HermitianMatrix sample_source_matrix(int n, const SourceSpec& src, Rng& rng) {
  check_source(n, src);
  HermitianMatrix m = sample_gue(n, rng);
  for (int j = 0; j < n; ++j) m.entries(j, j) += src.epsilons[j];
  return m;
}

Tridiagonal sample_gue_tridiagonal(int n, Rng& rng, double eps1) {
  require_size(n);
  std::normal_distribution<double> diag(0.0, std::sqrt(0.5));
  Tridiagonal t;
  t.d.resize(static_cast<std::size_t>(n));
  t.b.resize(static_cast<std::size_t>(n - 1));
  for (int k = 0; k < n; ++k) {
    t.d[k] = diag(rng);
    if (k + 1 < n) t.b[k] = chi(2.0 * (n - 1 - k), rng) / 2.0;
  }
  t.d[0] += eps1;
  return t;
}

Tridiagonal sample_goe_tridiagonal(int n, Rng& rng) {
  require_size(n);
  std::normal_distribution<double> diag(0.0, 1.0);
  Tridiagonal t;
  t.d.resize(static_cast<std::size_t>(n));
  t.b.resize(static_cast<std::size_t>(n - 1));
  for (int k = 0; k < n; ++k) {
    t.d[k] = diag(rng);
    if (k + 1 < n) t.b[k] = chi(static_cast<double>(n - 1 - k), rng) / std::sqrt(2.0);
  }
  return t;
}

double sample_source_top(int n, const SourceSpec& src, Rng& rng) {
  check_source(n, src);
  int nonzero = 0;
  double e1 = 0.0;
  for (double e : src.epsilons) {
    if (e != 0.0) {
      ++nonzero;
      e1 = e;
    }
  }
  // the GUE is unitarily invariant, so a single nonzero entry may sit first
  if (nonzero <= 1) return top_eigenvalue(sample_gue_tridiagonal(n, rng, e1));
  return eigs_hermitian(sample_source_matrix(n, src, rng)).maxCoeff();
}

double edge_scale(double lambda1, int n) {
  require_size(n);
  return (lambda1 - std::sqrt(2.0 * n)) * std::sqrt(2.0) * std::pow(n, 1.0 / 6.0);
}

double edge_unscale(double x, int n) {
  require_size(n);
  return std::sqrt(2.0 * n) + x / (std::sqrt(2.0) * std::pow(n, 1.0 / 6.0));
}

double gaussian_center(double lambda) {
  kernels::gauss_scale(lambda);
  return (lambda + 1.0 / lambda) / std::sqrt(2.0);
}

double edge_scale_gaussian(double lambda1, int n, double lambda) {
  require_size(n);
  const double b = kernels::gauss_scale(lambda);
  return (lambda1 - gaussian_center(lambda) * std::sqrt(static_cast<double>(n))) / b;
}

std::vector<Eigen::VectorXd> sample_dyson_chain(int n, const SourceSpec& src, const TimeGrid& grid, Rng& rng) {
  check_source(n, src);
  grid.validate();
  HermitianMatrix h = sample_gue(n, rng);
  for (int j = 0; j < n; ++j) h.entries(j, j) += src.epsilons[j] / 2.0;
  std::vector<Eigen::VectorXd> out;
  out.reserve(grid.times.size());
  out.push_back(eigs_hermitian(h));
  for (std::size_t k = 1; k < grid.times.size(); ++k) {
    const double a = std::exp(grid.times[k - 1] - grid.times[k]);
    const HermitianMatrix g = sample_gue(n, rng);
    h.entries = a * h.entries + std::sqrt(1.0 - a * a) * g.entries;
    out.push_back(eigs_hermitian(h));
  }
  return out;
}

}  // namespace rmt
}  // namespace pnglab
