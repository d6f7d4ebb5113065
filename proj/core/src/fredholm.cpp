#include "pnglab/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pnglab/errors.hpp"
#include "pnglab/special.hpp"

namespace pnglab {

void DeterminantProblem::validate() const {
  if (times.empty()) throw ConfigurationError("determinant problem: no times");
  if (times.size() != thresholds.size()) {
    throw ConfigurationError("determinant problem: times and thresholds differ in length");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw ConfigurationError("determinant problem: times must be strictly increasing");
  }
  if (quad_order < 8) throw ConfigurationError("determinant problem: quad_order must be >= 8");
  if (!(cutoff > 0.0)) throw ConfigurationError("determinant problem: cutoff must be positive");
  if (times.size() > 1 && !kernel.is_multi_time()) {
    throw ConfigurationError("determinant problem: kernel " + kernel.name() + " has a single time");
  }
}

namespace fredholm {

double nystrom(const ExtendedKernel& kernel, const std::vector<double>& times,
               const std::vector<double>& thresholds, int order, double cutoff) {
  const std::size_t m = times.size();
  std::vector<special::Quadrature> rules;
  rules.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double s = thresholds[j];
    if (std::isnan(s)) throw DomainError("Fredholm determinant: NaN threshold");
    if (s == std::numeric_limits<double>::infinity()) {
      rules.push_back({});
      continue;
    }
    if (!std::isfinite(s)) throw DomainError("Fredholm determinant: threshold -inf");
    rules.push_back(special::gauss_legendre(order, s, kernel.window_end(s, cutoff)));
  }

  std::vector<Eigen::Index> offset(m + 1, 0);
  for (std::size_t j = 0; j < m; ++j) offset[j + 1] = offset[j] + static_cast<Eigen::Index>(rules[j].size());
  const Eigen::Index total = offset[m];
  if (total == 0) return 1.0;

  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(total, total);
  for (std::size_t j = 0; j < m; ++j) {
    if (rules[j].size() == 0) continue;
    for (std::size_t k = 0; k < m; ++k) {
      if (rules[k].size() == 0) continue;
      const Eigen::MatrixXd b = kernel.block(times[j], rules[j].nodes, times[k], rules[k].nodes);
      for (Eigen::Index r = 0; r < b.rows(); ++r) {
        const double wr = std::sqrt(rules[j].weights[r]);
        for (Eigen::Index c = 0; c < b.cols(); ++c) {
          a(offset[j] + r, offset[k] + c) -= wr * b(r, c) * std::sqrt(rules[k].weights[c]);
        }
      }
    }
  }
  if (!a.allFinite()) throw NumericError("Fredholm determinant: non-finite kernel values in " + kernel.name());

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const Eigen::MatrixXd& u = lu.matrixLU();
  double log_abs = 0.0;
  int sign = lu.permutationP().determinant();
  for (Eigen::Index i = 0; i < total; ++i) {
    const double d = u(i, i);
    if (d == 0.0) return 0.0;
    if (d < 0.0) sign = -sign;
    log_abs += std::log(std::fabs(d));
  }
  return sign * std::exp(log_abs);
}

namespace {

DeterminantResult certify(const ExtendedKernel& kernel, const std::vector<double>& times,
                          const std::vector<double>& thresholds, int order, double cutoff) {
  DeterminantResult r;
  auto& c = r.certificate;
  c.order = order;
  c.check_order = 2 * order;
  c.tolerance = kernel.is_finite() ? kFiniteTolerance : kLimitTolerance;
  c.value = nystrom(kernel, times, thresholds, order, cutoff);
  c.check_value = nystrom(kernel, times, thresholds, 2 * order, cutoff);
  c.discrepancy = std::fabs(c.value - c.check_value);
  c.passed = c.discrepancy <= c.tolerance;
  r.value = std::clamp(c.check_value, 0.0, 1.0);
  return r;
}

double require(const DeterminantResult& r, const ExtendedKernel& kernel) {
  if (!r.certificate.passed) {
    std::ostringstream os;
    os << "Fredholm determinant of " << kernel.name() << " not converged: orders " << r.certificate.order
       << " and " << r.certificate.check_order << " differ by " << r.certificate.discrepancy;
    throw AccuracyError(os.str(), r.certificate.discrepancy, r.certificate.tolerance);
  }
  return r.value;
}

}  // namespace

DeterminantResult det_single_certified(const ExtendedKernel& kernel, double s, int quad_order, double cutoff) {
  DeterminantProblem p{kernel, {0.0}, {s}, quad_order, cutoff};
  p.validate();
  return certify(kernel, p.times, p.thresholds, quad_order, cutoff);
}

double det_single(const ExtendedKernel& kernel, double s, int quad_order, double cutoff) {
  return require(det_single_certified(kernel, s, quad_order, cutoff), kernel);
}

DeterminantResult det_multi_certified(const DeterminantProblem& problem) {
  problem.validate();
  return certify(problem.kernel, problem.times, problem.thresholds, problem.quad_order, problem.cutoff);
}

double det_multi(const DeterminantProblem& problem) {
  return require(det_multi_certified(problem), problem.kernel);
}

double dist_f2(double s) { return det_single(ExtendedKernel::airy(), s); }

double dist_goe2(double s) { return det_single(ExtendedKernel::goe2(), s); }

double dist_transition(double s, double omega, double tau) {
  if (omega + tau < 0.0) throw DomainError("dist_transition requires omega + tau >= 0");
  DeterminantProblem p{ExtendedKernel::transition(omega), {tau}, {s}};
  return det_multi(p);
}

double dist_finite_n(double s, const SourceSpec& src) {
  return det_single(ExtendedKernel::finite_static(src), s);
}

}  // namespace fredholm
}  // namespace pnglab
