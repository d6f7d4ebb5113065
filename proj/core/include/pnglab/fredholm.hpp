#pragma once

#include <vector>

#include "pnglab/extended_kernel.hpp"

namespace pnglab {

/// Convergence certificate: the determinant at two Nystrom orders.
struct Certificate {
  int order = 0;
  int check_order = 0;
  double value = 0.0;
  double check_value = 0.0;
  double discrepancy = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct DeterminantResult {
  double value = 0.0;  // the higher-order value
  Certificate certificate;
};

/// Joint distribution det(1 + K G) with G(tau_j, .) = -indicator of (s_j, inf).
struct DeterminantProblem {
  ExtendedKernel kernel = ExtendedKernel::airy();
  std::vector<double> times;
  std::vector<double> thresholds;
  int quad_order = 48;
  double cutoff = 14.0;

  void validate() const;
};

namespace fredholm {

inline constexpr double kLimitTolerance = 1e-8;
inline constexpr double kFiniteTolerance = 1e-6;

/// Plain Nystrom value of det(I - M) at one order, no certificate. Blocks may
/// come in any time order.
double nystrom(const ExtendedKernel& kernel, const std::vector<double>& times,
               const std::vector<double>& thresholds, int order, double cutoff);

/// Certified determinants (orders n and 2n). The plain versions throw
/// AccuracyError when the certificate fails.
DeterminantResult det_single_certified(const ExtendedKernel& kernel, double s, int quad_order = 48,
                                       double cutoff = 14.0);
double det_single(const ExtendedKernel& kernel, double s, int quad_order = 48, double cutoff = 14.0);

DeterminantResult det_multi_certified(const DeterminantProblem& problem);
double det_multi(const DeterminantProblem& problem);

/// GUE Tracy-Widom F2.
double dist_f2(double s);
/// F1(s)^2.
double dist_goe2(double s);
/// One-point law of the transition kernel at (omega, tau).
double dist_transition(double s, double omega, double tau);
/// Exact P[lambda_1 <= s] for H + diag(eps), H ~ exp(-tr H^2).
double dist_finite_n(double s, const SourceSpec& src);

}  // namespace fredholm
}  // namespace pnglab
