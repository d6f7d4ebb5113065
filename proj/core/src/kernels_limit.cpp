#include <cmath>
#include <numbers>
#include <string>

#include "pnglab/errors.hpp"
#include "pnglab/kernels.hpp"
#include "pnglab/special.hpp"

namespace pnglab::kernels {
namespace {

using special::airy_ai;

// lambda rules: [0, 40] for the damped branch, [-40, 0] for the oscillatory one
const special::Quadrature& positive_rule() {
  static const auto q = special::composite_gauss_legendre(16, 20, 0.0, 40.0);
  return q;
}

const special::Quadrature& negative_rule() {
  static const auto q = special::composite_gauss_legendre(16, 24, -40.0, 0.0);
  return q;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + ": non-finite argument");
}

// T(i, k) = Ai(points[i] + nodes[k])
Eigen::MatrixXd airy_table(std::span<const double> points, const special::Quadrature& rule) {
  Eigen::MatrixXd t(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(rule.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    require_finite(points[i], "airy kernel");
    for (std::size_t k = 0; k < rule.size(); ++k) t(i, k) = airy_ai(points[i] + rule.nodes[k]);
  }
  return t;
}

// integral over [xi, inf) of exp(c u) Ai(u), 0 <= c < 1
double weighted_tail(double xi, double c) {
  static const auto unit = special::composite_gauss_legendre(8, 20, 0.0, 32.0);
  const double start = std::max(xi, 0.0);
  double sum = unit.integrate([&](double t) { return std::exp(c * (start + t)) * airy_ai(start + t); });
  if (xi < 0.0) {
    const int panels = static_cast<int>(std::ceil(-xi / 2.0));
    const auto rule = special::composite_gauss_legendre(panels, 20, xi, 0.0);
    sum += rule.integrate([c](double u) { return std::exp(c * u) * airy_ai(u); });
  }
  return sum;
}

}  // namespace

Eigen::MatrixXd k2_ext_block(double tau1, std::span<const double> xs, double tau2,
                             std::span<const double> ys) {
  require_finite(tau1, "k2_ext");
  require_finite(tau2, "k2_ext");
  const double t = tau1 - tau2;
  if (t >= 0.0 || t <= -1.0) {
    const auto& rule = t >= 0.0 ? positive_rule() : negative_rule();
    const Eigen::MatrixXd ax = airy_table(xs, rule);
    const Eigen::MatrixXd ay = airy_table(ys, rule);
    Eigen::VectorXd w(static_cast<Eigen::Index>(rule.size()));
    for (std::size_t k = 0; k < rule.size(); ++k) w[k] = rule.weights[k] * std::exp(-rule.nodes[k] * t);
    Eigen::MatrixXd k = ax * w.asDiagonal() * ay.transpose();
    if (t < 0.0) k = -k;
    return k;
  }
  // 0 < T < 1: the full-line integral is a heat kernel; subtract it from the
  // positive half-line integral.
  const double big_t = -t;
  const auto& rule = positive_rule();
  const Eigen::MatrixXd ax = airy_table(xs, rule);
  const Eigen::MatrixXd ay = airy_table(ys, rule);
  Eigen::VectorXd w(static_cast<Eigen::Index>(rule.size()));
  for (std::size_t k = 0; k < rule.size(); ++k) w[k] = rule.weights[k] * std::exp(rule.nodes[k] * big_t);
  Eigen::MatrixXd k = ax * w.asDiagonal() * ay.transpose();
  const double norm = 1.0 / std::sqrt(4.0 * std::numbers::pi * big_t);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double d = xs[i] - ys[j];
      k(i, j) -= norm * std::exp(-d * d / (4.0 * big_t) - big_t * (xs[i] + ys[j]) / 2.0 +
                                 big_t * big_t * big_t / 12.0);
    }
  }
  return k;
}

double source_term(double xi, double c) {
  require_finite(xi, "source_term");
  require_finite(c, "source_term");
  if (c < 0.0) {
    throw DomainError("source term diverges: omega + tau2 = " + std::to_string(c) + " < 0");
  }
  if (c >= 1.0) {
    const auto& rule = negative_rule();
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double lam = -rule.nodes[k];
      sum += rule.weights[k] * std::exp(-c * lam) * airy_ai(xi - lam);
    }
    return sum;
  }
  // integral of exp(c u) Ai(u) over the real line is exp(c^3 / 3)
  return std::exp(-c * xi) * (std::exp(c * c * c / 3.0) - weighted_tail(xi, c));
}

Eigen::MatrixXd transition_block(double tau1, std::span<const double> xs, double tau2,
                                 std::span<const double> ys, double omega) {
  require_finite(omega, "k_transition");
  const double c = omega + tau2;
  if (c < 0.0) {
    throw DomainError("transition kernel requires omega + tau2 >= 0, got " + std::to_string(c));
  }
  Eigen::MatrixXd k = k2_ext_block(tau1, xs, tau2, ys);
  Eigen::VectorXd ai(static_cast<Eigen::Index>(xs.size()));
  Eigen::VectorXd r(static_cast<Eigen::Index>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) ai[i] = airy_ai(xs[i]);
  for (std::size_t j = 0; j < ys.size(); ++j) r[j] = source_term(ys[j], c);
  k += ai * r.transpose();
  return k;
}

double k2_ext(SpaceTimePoint p1, SpaceTimePoint p2) {
  const double x = p1.xi, y = p2.xi;
  return k2_ext_block(p1.tau, std::span(&x, 1), p2.tau, std::span(&y, 1))(0, 0);
}

double k2(double x, double y) { return k2_ext({0.0, x}, {0.0, y}); }

double k12(double x, double y) {
  require_finite(y, "k12");
  return k2(x, y) + airy_ai(x) * (1.0 - special::airy_tail(y));
}

double k_transition(SpaceTimePoint p1, SpaceTimePoint p2, double omega) {
  const double x = p1.xi, y = p2.xi;
  return transition_block(p1.tau, std::span(&x, 1), p2.tau, std::span(&y, 1), omega)(0, 0);
}

double gauss_scale(double lambda) {
  require_finite(lambda, "gauss_scale");
  if (!(lambda > 1.0)) throw DomainError("Gaussian regime requires Lambda > 1");
  return std::sqrt((lambda * lambda - 1.0) / (2.0 * lambda * lambda));
}

double k_gauss_limit(double X, double lambda) {
  require_finite(X, "k_gauss_limit");
  const double b = gauss_scale(lambda);
  return std::exp(-X * X / 2.0) / (std::sqrt(2.0 * std::numbers::pi) * b);
}

}  // namespace pnglab::kernels
