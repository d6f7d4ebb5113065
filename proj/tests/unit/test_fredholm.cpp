#include <cmath>
#include <vector>

#include <doctest.h>

#include "pnglab/errors.hpp"
#include "pnglab/fredholm.hpp"
#include "pnglab/rmt.hpp"
#include "pnglab/special.hpp"
#include "pnglab/statistics.hpp"

using namespace pnglab;
using namespace pnglab::fredholm;

namespace {

// Frozen values, computed independently (see tests/oracles/reference_values.py).
struct Frozen {
  double s, f2, goe2;
};
const Frozen kFrozen[] = {
    {-5.0, 2.1359969847553e-05, 7.72382785000688e-08}, {-3.0, 0.0803195529393339, 0.00484417654635216},
    {-2.0, 0.413224142505114, 0.0752515709809471},     {-1.0, 0.807214241999279, 0.340810642110924},
    {0.0, 0.969372828355261, 0.692071030613522},       {1.0, 0.997505438149389, 0.905202370046299},
    {2.0, 0.999887553698309, 0.979303352696987},
};

}  // namespace

TEST_CASE("F2 and F1^2 against frozen values") {
  for (const auto& f : kFrozen) {
    CAPTURE(f.s);
    CHECK(std::fabs(dist_f2(f.s) - f.f2) < 1e-9);
    CHECK(std::fabs(dist_goe2(f.s) - f.goe2) < 1e-9);
  }
}

TEST_CASE("distribution function properties") {
  CHECK(dist_f2(-1.0) < dist_f2(0.0));
  CHECK(dist_f2(0.0) < dist_f2(1.0));
  CHECK(dist_f2(-8.0) < 1e-3);
  CHECK(dist_f2(4.0) > 1.0 - 1e-4);
  CHECK(std::fabs(dist_f2(20.0) - 1.0) < 1e-10);
  CHECK(std::fabs(dist_goe2(20.0) - 1.0) < 1e-10);
  double prev = 0.0;
  for (double s = -6.0; s <= 3.0; s += 0.5) {
    const double g = dist_goe2(s), f = dist_f2(s);
    CHECK(g >= 0.0);
    CHECK(f <= 1.0);
    CHECK(g <= f + 0.2);
    CHECK(g >= prev);
    prev = g;
  }
}

TEST_CASE("self-convergence of the Nystrom discretization") {
  const auto airy = ExtendedKernel::airy();
  CHECK(std::fabs(nystrom(airy, {0.0}, {-1.0}, 48, 14.0) - nystrom(airy, {0.0}, {-1.0}, 96, 14.0)) < 1e-9);
  const auto r = det_single_certified(ExtendedKernel::goe2(), -2.0);
  CHECK(r.certificate.passed);
  CHECK(r.certificate.check_order == 2 * r.certificate.order);
  CHECK(r.certificate.discrepancy < 1e-8);
  CHECK(r.value == doctest::Approx(dist_goe2(-2.0)).epsilon(1e-12));
}

TEST_CASE("an unattainable certificate raises") {
  // eight nodes cannot resolve the Airy kernel on a wide window
  CHECK_THROWS_AS(det_single(ExtendedKernel::airy(), -6.0, 8, 40.0), AccuracyError);
  CHECK_THROWS_AS(det_single(ExtendedKernel::airy(), -6.0, 4, 14.0), ConfigurationError);
}

TEST_CASE("transition family limits and monotonicity") {
  double gap25 = 0.0, gap100 = 0.0;
  for (double s = -4.0; s <= 2.0001; s += 1.0) {
    CHECK(std::fabs(dist_transition(s, 0.0, 0.0) - dist_goe2(s)) < 1e-9);
    gap25 = std::max(gap25, std::fabs(dist_transition(s, 25.0, 0.0) - dist_f2(s)));
    gap100 = std::max(gap100, std::fabs(dist_transition(s, 100.0, 0.0) - dist_f2(s)));
  }
  // F2 is approached at rate 1 / omega
  CHECK(gap25 / gap100 == doctest::Approx(4.0).epsilon(0.05));
  CHECK(std::fabs(dist_transition(-1.0, 400.0, 0.0) - dist_f2(-1.0)) < 1e-3);
  double prev = 0.0;
  for (double w : {0.0, 1.0, 5.0, 25.0}) {
    const double v = dist_transition(0.0, w, 0.0);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(prev <= dist_f2(0.0) + 1e-9);
  CHECK_THROWS_AS(dist_transition(0.0, -1.0, 0.0), DomainError);
}

TEST_CASE("rank-one Gaussian kernel gives the normal law") {
  const auto k = ExtendedKernel::gauss_limit(1.5, 100);
  for (double s : {-2.0, -0.5, 0.0, 1.3}) {
    CHECK(std::fabs(det_single(k, s) - special::std_normal_cdf(s)) < 1e-10);
  }
}

TEST_CASE("finite-N law at N = 1 is Gaussian") {
  for (double eps : {0.0, 1.2}) {
    const auto src = SourceSpec::from_values({eps});
    for (double s = -3.0; s <= 4.0001; s += 0.5) {
      CHECK(std::fabs(dist_finite_n(s, src) - 0.5 * (1.0 + std::erf(s - eps))) < 1e-6);
    }
  }
}

TEST_CASE("finite-N law obeys the Weyl bounds") {
  const auto zero = SourceSpec::zeros(2);
  const auto src = SourceSpec::from_values({3.0, 0.0});
  for (double s : {0.0, 1.5, 3.0, 4.5}) {
    const double f = dist_finite_n(s, src);
    CHECK(f <= dist_finite_n(s, zero) + 1e-9);
    CHECK(f >= dist_finite_n(s - 3.0, zero) - 1e-9);
  }
}

TEST_CASE("finite-N law against Monte Carlo at N = 4") {
  const auto src = SourceSpec::rank_one_lambda(4, 1.0);
  std::vector<double> top;
  const int samples = 20000;
  for (int i = 0; i < samples; ++i) {
    Rng rng = make_stream(3, static_cast<std::uint64_t>(i));
    top.push_back(rmt::eigs_hermitian(rmt::sample_source_matrix(4, src, rng)).maxCoeff());
  }
  const auto tab = tabulate_cdf([&](double s) { return dist_finite_n(s, src); }, -2.0, 6.0, 0.1);
  CHECK(ks_distance(empirical_cdf(top), tab) < 0.02);
}

TEST_CASE("GUE Monte Carlo matches F2") {
  std::vector<double> x;
  for (int i = 0; i < 20000; ++i) {
    Rng rng = make_stream(17, static_cast<std::uint64_t>(i));
    x.push_back(rmt::edge_scale(rmt::top_eigenvalue(rmt::sample_gue_tridiagonal(400, rng)), 400));
  }
  const auto tab = tabulate_cdf(dist_f2, -8.0, 6.0, 0.05);
  CHECK(ks_distance(empirical_cdf(x), tab) < 0.05);
}

TEST_CASE("multi-time determinants") {
  DeterminantProblem one;
  one.kernel = ExtendedKernel::transition(0.0);
  one.times = {0.0};
  one.thresholds = {-1.0};
  CHECK(det_multi(one) == doctest::Approx(dist_transition(-1.0, 0.0, 0.0)).epsilon(1e-12));

  DeterminantProblem far;
  far.kernel = ExtendedKernel::transition(0.0);
  far.times = {0.0, 8.0};
  far.thresholds = {0.0, 0.0};
  CHECK(std::fabs(det_multi(far) - dist_transition(0.0, 0.0, 0.0) * dist_transition(0.0, 0.0, 8.0)) < 1e-3);

  far.thresholds = {20.0, 20.0};
  CHECK(std::fabs(det_multi(far) - 1.0) < 1e-10);

  // swapping the blocks leaves the determinant unchanged
  const auto k = ExtendedKernel::transition(0.5);
  const double a = nystrom(k, {0.0, 0.6}, {-0.5, 0.3}, 48, 14.0);
  const double b = nystrom(k, {0.6, 0.0}, {0.3, -0.5}, 48, 14.0);
  CHECK(a == doctest::Approx(b).epsilon(1e-12));

  // monotone in each threshold
  DeterminantProblem p;
  p.kernel = ExtendedKernel::airy();
  p.times = {0.0, 0.5};
  p.thresholds = {-1.0, -1.0};
  const double base = det_multi(p);
  p.thresholds = {-0.5, -1.0};
  CHECK(det_multi(p) >= base);

  DeterminantProblem bad = p;
  bad.times = {0.5, 0.0};
  CHECK_THROWS_AS(bad.validate(), ConfigurationError);
  bad = p;
  bad.quad_order = 4;
  CHECK_THROWS_AS(bad.validate(), ConfigurationError);
}

TEST_CASE("finite dynamical determinant at a single time is the static law") {
  // the chain starts at V / 2 + GUE, the static ensemble with source eps / 2
  const auto dyn = SourceSpec::from_values({1.0, 0.0});
  DeterminantProblem p;
  p.kernel = ExtendedKernel::finite_dynamical(dyn, {0.0, 0.7});
  p.times = {0.0};
  p.thresholds = {0.8};
  CHECK(det_multi(p) == doctest::Approx(dist_finite_n(0.8, SourceSpec::from_values({0.5, 0.0}))).epsilon(1e-7));
  p.times = {0.0, 0.7};
  p.thresholds = {20.0, 20.0};
  CHECK(std::fabs(det_multi(p) - 1.0) < 1e-8);
}
