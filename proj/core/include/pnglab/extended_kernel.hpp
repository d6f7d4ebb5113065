#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "pnglab/kernels.hpp"

namespace pnglab {

/// A kernel over (time, position) pairs ready for Nystrom discretization.
///
/// evaluate() and block() return a conjugated form u(p1) K(p1, p2) / u(p2)
/// chosen to keep entries of order one; every Fredholm determinant (and every
/// principal minor) is unchanged by such a conjugation.
class ExtendedKernel {
 public:
  /// Extended Airy kernel (the GUE edge, multi-time capable).
  struct Airy {};
  /// k12 (one time only; tau is ignored).
  struct Goe2 {};
  /// Extended Airy kernel plus the rank-one source term.
  struct Transition {
    double omega = 0.0;
  };
  /// Static finite-N kernel of H + V; positions are raw eigenvalues.
  struct FiniteStatic {
    SourceSpec source;
  };
  /// Dynamical finite-N kernel of the chain started at V / 2 + GUE. Points
  /// must use times from the grid.
  struct FiniteDynamical {
    SourceSpec source;
    std::vector<double> times;
  };
  /// Gaussian-regime limit in the variable X of edge_scale_gaussian.
  struct GaussLimit {
    double lambda = 2.0;
    int n = 1;
  };
  using Variant = std::variant<Airy, Goe2, Transition, FiniteStatic, FiniteDynamical, GaussLimit>;

  static ExtendedKernel airy();
  static ExtendedKernel goe2();
  static ExtendedKernel transition(double omega);
  static ExtendedKernel finite_static(SourceSpec src, ContourOptions opts = {});
  static ExtendedKernel finite_dynamical(SourceSpec src, std::vector<double> times, ContourOptions opts = {});
  static ExtendedKernel gauss_limit(double lambda, int n);

  const Variant& variant() const noexcept { return variant_; }
  const ContourOptions& contour() const noexcept { return contour_; }
  ExtendedKernel with_contour(ContourOptions opts) const;

  std::string name() const;
  bool is_finite() const noexcept;
  bool is_multi_time() const noexcept;

  double evaluate(SpaceTimePoint p1, SpaceTimePoint p2) const;

  /// [evaluate({tau1, xs[i]}, {tau2, ys[j]})]_{i,j}
  Eigen::MatrixXd block(double tau1, std::span<const double> xs, double tau2,
                        std::span<const double> ys) const;

  /// Right end of the integration window (s, end) holding all mass beyond s.
  double window_end(double s, double cutoff) const;

 private:
  explicit ExtendedKernel(Variant v, ContourOptions opts = {});
  void check_time(double t) const;

  Variant variant_;
  ContourOptions contour_;
};

}  // namespace pnglab
