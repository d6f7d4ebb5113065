#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "pnglab/errors.hpp"
#include "pnglab/extended_kernel.hpp"
#include "pnglab/kernels.hpp"
#include "pnglab/special.hpp"

using namespace pnglab;
using namespace pnglab::kernels;

namespace {

// Orthonormal oscillator functions for the weight exp(-x^2).
std::vector<double> oscillator(int n, double x) {
  std::vector<double> psi(static_cast<std::size_t>(n));
  psi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-x * x / 2.0);
  if (n > 1) psi[1] = std::sqrt(2.0) * x * psi[0];
  for (int k = 1; k + 1 < n; ++k) {
    psi[k + 1] = std::sqrt(2.0 / (k + 1)) * x * psi[k] - std::sqrt(static_cast<double>(k) / (k + 1)) * psi[k - 1];
  }
  return psi;
}

double hermite_kernel(int n, double x, double y) {
  const auto a = oscillator(n, x), b = oscillator(n, y);
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

// Physicists' Hermite polynomial by recurrence.
double hermite_h(int k, double x) {
  double h0 = 1.0, h1 = 2.0 * x;
  if (k == 0) return h0;
  for (int j = 1; j < k; ++j) {
    const double h2 = 2.0 * x * h1 - 2.0 * j * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

template <class K>
double minor2(K&& k, double x1, double x2) {
  return k(x1, x1) * k(x2, x2) - k(x1, x2) * k(x2, x1);
}

const std::vector<double> kGrid9 = {-3.0, -2.375, -1.75, -1.125, -0.5, 0.125, 0.75, 1.375, 2.0};

}  // namespace

TEST_CASE("k2 is symmetric and matches the Christoffel-Darboux form") {
  CHECK(k2(1.3, -0.7) == doctest::Approx(k2(-0.7, 1.3)).epsilon(1e-14));
  CHECK(k2(0.0, 0.0) == doctest::Approx(0.066987483779663974144).epsilon(1e-11));
  CHECK(std::fabs(k2(10.0, 10.0)) < 1e-18);
  for (double x : kGrid9) {
    for (double y : kGrid9) {
      const auto ax = special::airy(x), ay = special::airy(y);
      const double cd = x == y ? ax.ai_prime * ax.ai_prime - x * ax.ai * ax.ai
                               : (ax.ai * ay.ai_prime - ax.ai_prime * ay.ai) / (x - y);
      CHECK(std::fabs(k2(x, y) - cd) < 1e-8);
    }
  }
}

TEST_CASE("k12 adds the rank-one GOE term") {
  for (double x : {-2.0, -0.3, 0.0, 1.7}) {
    for (double y : {-1.5, 0.0, 0.4, 2.5}) {
      CHECK(k12(x, y) - k2(x, y) == doctest::Approx(special::airy_ai(x) * (1.0 - special::airy_tail(y))).epsilon(1e-12));
    }
    CHECK(std::fabs(k12(x, 30.0) - special::airy_ai(x)) < 1e-10);
  }
  CHECK(std::fabs(k12(0.0, 2.0) - k12(2.0, 0.0)) > 1e-3);
}

TEST_CASE("extended Airy kernel") {
  for (double x : {-1.0, 0.5}) {
    for (double y : {-0.5, 1.2}) {
      CHECK(k2_ext({0.3, x}, {0.3, y}) == doctest::Approx(k2(x, y)).epsilon(1e-10));
    }
  }
  CHECK(k2_ext({0.0, 0.0}, {0.0, 0.0}) == doctest::Approx(k2(0.0, 0.0)).epsilon(1e-10));
  // decorrelation is algebraic: k2_ext((0,x),(T,y)) = -f(0)/T + f'(0)/T^2 + ..., f(l) = Ai(x+l)Ai(y+l)
  double sup8 = 0.0, sup16 = 0.0, resid = 0.0;
  for (double x = -2.0; x <= 2.0001; x += 0.5) {
    for (double y = -2.0; y <= 2.0001; y += 0.5) {
      const auto ax = special::airy(x), ay = special::airy(y);
      const double f0 = ax.ai * ay.ai, f1 = ax.ai_prime * ay.ai + ax.ai * ay.ai_prime;
      const double k8 = k2_ext({0.0, x}, {8.0, y});
      sup8 = std::max(sup8, std::fabs(k8));
      sup16 = std::max(sup16, std::fabs(k2_ext({0.0, x}, {16.0, y})));
      resid = std::max(resid, std::fabs(k8 + f0 / 8.0 - f1 / 64.0));
    }
  }
  CHECK(resid < 3e-3);
  CHECK(sup8 / sup16 == doctest::Approx(2.0).epsilon(0.05));
  // block form agrees with pointwise evaluation in both time orders
  const std::vector<double> xs = {-1.0, 0.0, 1.5};
  const auto b = k2_ext_block(0.0, xs, 0.7, xs);
  const auto c = k2_ext_block(0.7, xs, 0.0, xs);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(b(i, j) == doctest::Approx(k2_ext({0.0, xs[i]}, {0.7, xs[j]})).epsilon(1e-8));
      CHECK(c(i, j) == doctest::Approx(k2_ext({0.7, xs[i]}, {0.0, xs[j]})).epsilon(1e-8));
    }
  }
}

TEST_CASE("transition kernel limits") {
  for (double x : {-2.0, 0.0, 1.0}) {
    for (double y : {-1.0, 0.5, 2.0}) {
      CHECK(k_transition({0, x}, {0, y}, 0.0) == doctest::Approx(k12(x, y)).epsilon(1e-9));
    }
  }
  // the rank-one term decays like Ai(x) (Ai(y)/c - Ai'(y)/c^2) with c = omega + tau2
  double worst = 0.0, worst_tau = 0.0;
  for (double x = -2.0; x <= 2.0001; x += 0.5) {
    for (double y = -2.0; y <= 2.0001; y += 0.5) {
      const double lead = special::airy_ai(x) * (special::airy_ai(y) / 25.0 - special::airy_ai_prime(y) / 625.0);
      worst = std::max(worst, std::fabs(k_transition({0, x}, {0, y}, 25.0) - k2_ext({0, x}, {0, y}) - lead));
      worst_tau = std::max(
          worst_tau, std::fabs(k_transition({25.0, x}, {25.0, y}, 0.0) - k2_ext({25.0, x}, {25.0, y}) - lead));
    }
  }
  CHECK(worst < 1e-4);
  CHECK(worst_tau < 1e-4);
  CHECK_THROWS_AS(k_transition({0, 0}, {0, 0}, -0.5), DomainError);
  CHECK(source_term(0.0, 0.0) == doctest::Approx(1.0 - special::airy_tail(0.0)).epsilon(1e-9));
}

TEST_CASE("Ornstein-Uhlenbeck propagator") {
  CHECK(phi_ou(1.0, 0.2, 0.5, 0.1) == 0.0);
  CHECK_THROWS_AS(phi_ou(0.5, 0.0, 0.5, 0.0), DomainError);
  const auto q = special::composite_gauss_legendre(40, 20, -30.0, 30.0);
  for (double dt : {0.3, 1.0}) {
    const double mass = q.integrate([&](double y) { return phi_ou(0.0, 0.7, dt, y); });
    CHECK(mass == doctest::Approx(std::exp(-dt / 2.0)).epsilon(1e-10));
    for (double y : {-0.4, 1.1}) {
      const double v = q.integrate([&](double x) { return std::exp(-x * x) * phi_ou(0.0, x, dt, y); });
      CHECK(v == doctest::Approx(std::exp(-dt / 2.0) * std::exp(-y * y)).epsilon(1e-10));
    }
  }
  CHECK(balanced_phi(0.0, 0.3, 0.5, -0.2) ==
        doctest::Approx(phi_ou(0.0, 0.3, 0.5, -0.2) * std::exp((0.04 - 0.09) / 2.0)).epsilon(1e-13));
}

TEST_CASE("finite static kernel reduces to the Hermite kernel without source") {
  for (int n : {1, 3}) {
    const auto src = SourceSpec::zeros(n);
    for (double x : {-2.0, -0.5, 0.0, 1.0, 2.0}) {
      for (double y : {-2.0, 0.3, 1.5}) {
        const double bal = k_finite_static(x, y, src) * std::exp((x * x - y * y) / 2.0);
        CHECK(std::fabs(bal - hermite_kernel(n, x, y)) < 1e-7);
      }
    }
  }
}

TEST_CASE("finite static kernel at N = 1 carries the shifted Gaussian density") {
  for (double eps : {0.0, 1.2}) {
    const auto src = SourceSpec::from_values({eps});
    for (double x : {-1.0, 0.4, 2.0}) {
      CHECK(k_finite_static(x, x, src) ==
            doctest::Approx(std::exp(-(x - eps) * (x - eps)) / std::sqrt(std::numbers::pi)).epsilon(1e-9));
    }
  }
}

TEST_CASE("dynamical kernel at one time matches the static kernel up to conjugation") {
  const auto dyn_src = SourceSpec::from_values({1.0, 0.0, -0.6});
  const auto st_src = SourceSpec::from_values({0.5, 0.0, -0.3});
  const std::vector<double> pts = {-1.5, -0.2, 0.8, 1.9};
  for (double a : pts) {
    CHECK(k_finite_dyn(0, a, 0, a, dyn_src) == doctest::Approx(k_finite_static(a, a, st_src)).epsilon(1e-6));
    for (double b : pts) {
      const double md = minor2([&](double x, double y) { return k_finite_dyn(0, x, 0, y, dyn_src); }, a, b);
      const double ms = minor2([&](double x, double y) { return k_finite_static(x, y, st_src); }, a, b);
      CHECK(std::fabs(md - ms) < 1e-6);
    }
  }
  const auto zero = SourceSpec::zeros(3);
  for (double x : {-1.0, 0.5}) {
    for (double y : {-0.3, 1.4}) {
      const double bal = k_finite_dyn(0, x, 0, y, zero) * std::exp((x * x - y * y) / 2.0);
      CHECK(std::fabs(bal - hermite_kernel(3, x, y)) < 1e-7);
    }
  }
}

TEST_CASE("dynamical kernel against the biorthogonal sum") {
  // e^{x^2-y^2} K = e^{-y^2} sum_j G_j(x) F_j(y) e^{-(j+1/2)(t_s-t_r)} / (sqrt(pi) 2^j j!) - phi
  const std::vector<double> eps = {1.0, 0.0};
  const double tr = 0.0, ts = 0.7;
  for (double x : {-0.8, 0.3}) {
    for (double y : {-0.4, 1.0}) {
      auto scaled = [&](double t) {
        std::vector<double> e(eps);
        for (double& v : e) v *= std::exp(-t);
        return SourceSpec::from_values(e);
      };
      double sum = 0.0;
      for (int j = 0; j < 2; ++j) {
        sum += mh_second(j, scaled(tr), x) * mh_first(j, scaled(ts), y) * std::exp(-(j + 0.5) * (ts - tr)) /
               (std::sqrt(std::numbers::pi) * std::pow(2.0, j) * std::tgamma(j + 1.0));
      }
      sum *= std::exp(-y * y);
      const double k = k_finite_dyn(tr, x, ts, y, SourceSpec::from_values(eps)) * std::exp(x * x - y * y);
      CHECK(k + phi_ou(tr, x, ts, y) == doctest::Approx(sum).epsilon(1e-7));
    }
  }
}

TEST_CASE("contour refinement leaves finite kernels unchanged") {
  ContourOptions fine;
  fine.refinement = 2;
  const auto st = SourceSpec::rank_one_lambda(20, 1.0);
  const auto dy = SourceSpec::rank_one_omega(20, 0.5);
  for (double x : {5.0, 6.3}) {
    for (double y : {5.5, 6.8}) {
      const double a = k_finite_static(x, y, st), b = k_finite_static(x, y, st, fine);
      CHECK(std::fabs(a - b) <= 1e-7 * std::max(1.0, std::fabs(a)));
      const double c = k_finite_dyn(0.0, x, 0.4, y, dy), d = k_finite_dyn(0.0, x, 0.4, y, dy, fine);
      CHECK(std::fabs(c - d) <= 1e-7 * std::max(1.0, std::fabs(c)));
    }
  }
}

TEST_CASE("shifted-line geometry agrees with the saddle geometry and rejects negative poles") {
  ContourOptions shifted;
  shifted.geometry = ContourGeometry::ShiftedLine;
  const auto src = SourceSpec::from_values({0.8, 0.0, 0.0});
  for (double x : {-0.5, 1.0}) {
    for (double y : {0.0, 1.3}) {
      CHECK(k_finite_static(x, y, src, shifted) == doctest::Approx(k_finite_static(x, y, src)).epsilon(1e-7));
    }
  }
  CHECK_THROWS_AS(k_finite_static(0.0, 0.0, SourceSpec::from_values({-1.0, 0.0}), shifted), ConfigurationError);
}

TEST_CASE("edge-scaled static kernel approaches k2 and k12") {
  auto discrepancy = [](int n, double lambda) {
    const auto src = SourceSpec::rank_one_lambda(n, lambda);
    const double sc = std::sqrt(2.0) * std::pow(n, 1.0 / 6.0);
    std::vector<double> xi, xs;
    for (double v = -1.0; v <= 1.0001; v += 0.5) {
      xi.push_back(v);
      xs.push_back(std::sqrt(2.0 * n) + v / sc);
    }
    std::vector<double> ep(src.epsilons);
    for (double& e : ep) e *= std::sqrt(2.0);
    const auto b = contour_block(ep, 0.0, xs, 0.0, xs, {});
    double worst = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i) {
      for (std::size_t j = 0; j < xi.size(); ++j) {
        const double ref = lambda < 1.0 ? k2(xi[i], xi[j]) : k12(xi[i], xi[j]);
        worst = std::max(worst, std::fabs(b(static_cast<int>(i), static_cast<int>(j)) / sc - ref));
      }
    }
    return worst;
  };
  for (double lambda : {0.5, 1.0}) {
    const double coarse = discrepancy(200, lambda), fine = discrepancy(800, lambda);
    CHECK(fine < 0.05);
    CHECK(fine < coarse);
  }
}

TEST_CASE("multiple Hermite functions") {
  const auto zero = SourceSpec::zeros(5);
  for (int k = 0; k < 5; ++k) {
    for (double x : {-1.3, 0.45, 1.7}) {
      CHECK(mh_first(k, zero, x) == doctest::Approx(hermite_h(k, x)).epsilon(1e-9));
      CHECK(mh_second(k, zero, x) == doctest::Approx(hermite_h(k, x)).epsilon(1e-9));
    }
  }
  const auto src = SourceSpec::from_values({0.7, -0.4, 0.2});
  for (double x : {-1.0, 0.0, 2.0}) {
    const double e = 0.7 / std::sqrt(2.0);
    CHECK(mh_first(0, src, x) == doctest::Approx(std::exp(-e * e / 2.0 + std::sqrt(2.0) * e * x)).epsilon(1e-10));
    CHECK(mh_second(0, src, x) == doctest::Approx(1.0).epsilon(1e-10));
  }
  // F_2 lies in the span of exp(eps_j x)
  const std::vector<double> nodes = {-1.0, 0.3, 1.2};
  Eigen::Matrix3d m;
  Eigen::Vector3d rhs;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m(i, j) = std::exp(src.epsilons[j] * nodes[i]);
    rhs(i) = mh_first(2, src, nodes[i]);
  }
  const Eigen::Vector3d c = m.fullPivLu().solve(rhs);
  for (double x : {-0.6, 0.8, 1.9}) {
    double v = 0.0;
    for (int j = 0; j < 3; ++j) v += c(j) * std::exp(src.epsilons[j] * x);
    CHECK(v == doctest::Approx(mh_first(2, src, x)).epsilon(1e-8));
  }
  // G_k is a polynomial of degree k
  for (int k = 0; k < 3; ++k) {
    double diff = 0.0;
    for (int i = 0; i <= k + 1; ++i) {
      diff += (i % 2 ? -1.0 : 1.0) * std::tgamma(k + 2.0) / (std::tgamma(i + 1.0) * std::tgamma(k + 2.0 - i)) *
              mh_second(k, src, 0.3 + 0.5 * i);
    }
    CHECK(std::fabs(diff) < 1e-8);
  }
  CHECK_THROWS_AS(mh_first(3, src, 0.0), DomainError);
  CHECK_THROWS_AS(mh_second(-1, src, 0.0), DomainError);
}

TEST_CASE("biorthogonality of the multiple Hermite functions") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto q = special::gauss_hermite(80);
  for (int trial = 0; trial < 2; ++trial) {
    std::vector<double> e(7);
    for (double& v : e) v = u(rng);
    const auto src = SourceSpec::from_values(e);
    for (int j = 0; j <= 6; j += 3) {
      for (int k = 0; k <= 6; k += 2) {
        const double v = q.integrate([&](double x) { return mh_first(j, src, x) * mh_second(k, src, x); });
        const double norm = std::sqrt(std::numbers::pi) * std::pow(2.0, j) * std::tgamma(j + 1.0);
        CHECK(std::fabs(v - (j == k ? norm : 0.0)) < 1e-8 * norm);
      }
    }
  }
}

TEST_CASE("Gaussian-regime kernel") {
  CHECK(k_gauss_limit(0.0, std::sqrt(2.0)) == doctest::Approx(0.7978845608028654).epsilon(1e-12));
  CHECK(k_gauss_limit(0.8, 1.7) == doctest::Approx(k_gauss_limit(-0.8, 1.7)).epsilon(1e-15));
  CHECK(gauss_scale(std::sqrt(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(k_gauss_limit(0.0, 1.0), DomainError);
}

TEST_CASE("conjugated kernel evaluations keep every principal minor") {
  struct Case {
    ExtendedKernel kernel;
    std::function<double(double, double)> raw;
    std::vector<double> pts;
  };
  const auto st = SourceSpec::from_values({0.9, 0.0, 0.0});
  const auto dy = SourceSpec::from_values({1.1, 0.0, 0.0});
  std::vector<Case> cases = {
      {ExtendedKernel::airy(), [](double x, double y) { return k2(x, y); }, {-1.2, 0.1, 0.9}},
      {ExtendedKernel::goe2(), [](double x, double y) { return k12(x, y); }, {-1.2, 0.1, 0.9}},
      {ExtendedKernel::transition(0.7), [](double x, double y) { return k_transition({0, x}, {0, y}, 0.7); },
       {-1.0, 0.0, 1.3}},
      {ExtendedKernel::finite_static(st), [&](double x, double y) { return k_finite_static(x, y, st); },
       {-0.5, 0.6, 1.4}},
      {ExtendedKernel::finite_dynamical(dy, {0.0, 0.5}),
       [&](double x, double y) { return k_finite_dyn(0.0, x, 0.0, y, dy); }, {-0.5, 0.6, 1.4}},
      {ExtendedKernel::gauss_limit(1.6, 100), [](double, double y) { return gauss_scale(1.6) * k_gauss_limit(y, 1.6); },
       {-0.7, 0.2, 1.1}},
  };
  for (auto& c : cases) {
    CAPTURE(c.kernel.name());
    auto ev = [&](double x, double y) { return c.kernel.evaluate({0, x}, {0, y}); };
    Eigen::Matrix3d a, b;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        a(i, j) = ev(c.pts[i], c.pts[j]);
        b(i, j) = c.raw(c.pts[i], c.pts[j]);
      }
    }
    for (int i = 0; i < 3; ++i) {
      CHECK(a(i, i) == doctest::Approx(b(i, i)).epsilon(1e-9));
      for (int j = i + 1; j < 3; ++j) {
        const double ma = a(i, i) * a(j, j) - a(i, j) * a(j, i);
        const double mb = b(i, i) * b(j, j) - b(i, j) * b(j, i);
        CHECK(std::fabs(ma - mb) < 1e-9 * std::max(1.0, std::fabs(mb)));
      }
    }
    CHECK(std::fabs(a.determinant() - b.determinant()) < 1e-9 * std::max(1.0, std::fabs(b.determinant())));
  }
}
