#pragma once

#include <complex>
#include <cstddef>
#include <variant>
#include <vector>

namespace pnglab::special {

// ---------------------------------------------------------------------------
// Quadrature rules
// ---------------------------------------------------------------------------

struct Interval {
  double a;
  double b;
};

/// [s, s + length]: truncation of a semi-infinite integral.
struct SemiInfiniteTruncation {
  double s;
  double length;
};

/// Circle of centre `center` and radius `radius`, traversed anticlockwise.
/// Parameter nodes are angles in [0, 2 pi).
struct Circle {
  std::complex<double> center;
  double radius;
};

/// Vertical segment {x0 + i t : |t| <= half_height}, traversed upward.
/// Parameter nodes are the ordinates t.
struct VerticalLine {
  double abscissa;
  double half_height;
};

using QuadratureDomain = std::variant<Interval, SemiInfiniteTruncation, Circle, VerticalLine>;

/// A rule sum_i weights[i] f(nodes[i]) over a real parameter. For the contour
/// domains use point() and differential() to integrate f(z) dz.
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  QuadratureDomain domain;

  std::size_t size() const noexcept { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }

  /// Point of the complex plane for parameter node i (the node itself for
  /// real domains).
  std::complex<double> point(std::size_t i) const;

  /// weights[i] * dz/dparameter at node i, so that the contour integral of
  /// f(z) dz is sum_i differential(i) * f(point(i)).
  std::complex<double> differential(std::size_t i) const;
};

/// n-point Gauss-Legendre rule on [a, b]; exact for degree <= 2n - 1.
Quadrature gauss_legendre(int n, double a, double b);

/// `panels` equal sub-intervals of [a, b], each with an `order`-point
/// Gauss-Legendre rule.
Quadrature composite_gauss_legendre(int panels, int order, double a, double b);

/// n-point Gauss-Hermite rule for the weight exp(-x^2) on the real line.
Quadrature gauss_hermite(int n);

/// Equispaced trapezoid rule on a circle (spectrally accurate for periodic
/// analytic integrands).
Quadrature circle_trapezoid(std::complex<double> center, double radius, int n);

/// Composite Gauss-Legendre rule on the vertical segment of the given
/// half-height at abscissa x0.
Quadrature vertical_line(double x0, double half_height, int panels, int order);

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

struct AiryValue {
  double ai;
  double ai_prime;
};

/// Ai and Ai' together (shares the series/asymptotic work).
AiryValue airy(double x);

double airy_ai(double x);
double airy_ai_prime(double x);

/// Integral of Ai over [y, inf).
double airy_tail(double y);

/// Standard normal distribution function.
double std_normal_cdf(double s);

}  // namespace pnglab::special
