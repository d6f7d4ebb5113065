#include <cmath>
#include <numbers>

#include "pnglab/errors.hpp"
#include "pnglab/special.hpp"

namespace pnglab::special {
namespace {

// Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
void legendre_unit(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    // Re-evaluate the derivative at the converged node.
    double p0 = 1.0, p1 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
}

}  // namespace

std::complex<double> Quadrature::point(std::size_t i) const {
  const double t = nodes[i];
  if (const auto* c = std::get_if<Circle>(&domain)) {
    return c->center + std::polar(c->radius, t);
  }
  if (const auto* l = std::get_if<VerticalLine>(&domain)) {
    return {l->abscissa, t};
  }
  return {t, 0.0};
}

std::complex<double> Quadrature::differential(std::size_t i) const {
  const double t = nodes[i];
  if (const auto* c = std::get_if<Circle>(&domain)) {
    return weights[i] * std::complex<double>(0.0, 1.0) * std::polar(c->radius, t);
  }
  if (std::holds_alternative<VerticalLine>(domain)) {
    return {0.0, weights[i]};
  }
  return {weights[i], 0.0};
}

Quadrature gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ConfigurationError("gauss_legendre: n must be >= 1");
  if (!(a < b)) throw ConfigurationError("gauss_legendre: require a < b");
  std::vector<double> x, w;
  legendre_unit(n, x, w);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (int i = 0; i < n; ++i) {
    x[i] = mid + half * x[i];
    w[i] *= half;
  }
  return {std::move(x), std::move(w), Interval{a, b}};
}

Quadrature composite_gauss_legendre(int panels, int order, double a, double b) {
  if (panels < 1) throw ConfigurationError("composite_gauss_legendre: panels must be >= 1");
  if (order < 1) throw ConfigurationError("composite_gauss_legendre: order must be >= 1");
  if (!(a < b)) throw ConfigurationError("composite_gauss_legendre: require a < b");
  std::vector<double> ux, uw;
  legendre_unit(order, ux, uw);
  Quadrature q{{}, {}, Interval{a, b}};
  q.nodes.reserve(static_cast<std::size_t>(panels) * order);
  q.weights.reserve(q.nodes.capacity());
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (int i = 0; i < order; ++i) {
      q.nodes.push_back(lo + 0.5 * h * (ux[i] + 1.0));
      q.weights.push_back(0.5 * h * uw[i]);
    }
  }
  return q;
}

Quadrature gauss_hermite(int n) {
  if (n < 1) throw ConfigurationError("gauss_hermite: n must be >= 1");
  std::vector<double> x(n), w(n);
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * x[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * x[1];
    } else {
      z = 2.0 * z - x[i - 2];
    }
    double pp = 0.0;
    for (int it = 0; it < 200; ++it) {
      // Orthonormal Hermite recurrence.
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::fabs(dz) <= 1e-15 * std::max(1.0, std::fabs(z))) {
        // one more evaluation for pp at the converged node
        p1 = pim4;
        p2 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
        }
        pp = std::sqrt(2.0 * n) * p2;
        break;
      }
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = w[n - 1 - i] = 2.0 / (pp * pp);
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  // ascending order
  std::vector<double> xs(x.rbegin(), x.rend()), ws(w.rbegin(), w.rend());
  return {std::move(xs), std::move(ws),
          Interval{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()}};
}

Quadrature circle_trapezoid(std::complex<double> center, double radius, int n) {
  if (n < 1) throw ConfigurationError("circle_trapezoid: n must be >= 1");
  if (!(radius > 0.0)) throw ConfigurationError("circle_trapezoid: radius must be positive");
  Quadrature q{std::vector<double>(n), std::vector<double>(n, 2.0 * std::numbers::pi / n),
               Circle{center, radius}};
  for (int k = 0; k < n; ++k) q.nodes[k] = 2.0 * std::numbers::pi * k / n;
  return q;
}

Quadrature vertical_line(double x0, double half_height, int panels, int order) {
  if (!(half_height > 0.0)) throw ConfigurationError("vertical_line: half_height must be positive");
  auto q = composite_gauss_legendre(panels, order, -half_height, half_height);
  q.domain = VerticalLine{x0, half_height};
  return q;
}

}  // namespace pnglab::special
