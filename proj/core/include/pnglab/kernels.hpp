#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace pnglab {

/// Deterministic source (eps_1, ..., eps_N) of the matrix models.
///
/// Two conventions coexist. The static ensemble H + V with H ~ exp(-tr H^2)
/// uses the values as diagonal shifts (rank_one_lambda). The dynamical
/// ensemble with initial measure exp(-tr H^2 + tr V H) is centred at V / 2
/// (rank_one_omega). Each consumer documents which one it expects.
struct SourceSpec {
  int n = 0;
  std::vector<double> epsilons;

  static SourceSpec zeros(int n);
  static SourceSpec from_values(std::vector<double> eps);
  /// eps_1 = Lambda sqrt(N / 2), others zero (static edge scaling).
  static SourceSpec rank_one_lambda(int n, double lambda);
  /// eps_1 = sqrt(2N) (1 - omega N^{-1/3}), others zero (dynamical edge scaling).
  static SourceSpec rank_one_omega(int n, double omega);

  /// Throws ConfigurationError unless n >= 1, size matches, entries finite.
  void validate() const;
  double max_epsilon() const;
};

struct SpaceTimePoint {
  double tau = 0.0;
  double xi = 0.0;
};

enum class ContourGeometry {
  /// z-circle centred at 0 enclosing the poles, one vertical w-line per row
  /// through that row's saddle point. Works for every N.
  Saddle,
  /// Left line Re w = -sqrt(2) h with a small circle around the poles;
  /// only sensible for small N and nonnegative sources.
  ShiftedLine,
};

/// Discretization of the double contour integrals. Zero means automatic.
struct ContourOptions {
  ContourGeometry geometry = ContourGeometry::Saddle;
  double gap = 1.0;        // Saddle: margin d, scaled by max(1, N^{1/6})
  double shift = 0.25;     // ShiftedLine: offset h
  int circle_nodes = 0;
  int line_order = 20;
  double line_panel = 0.0;
  int refinement = 1;      // multiplies every node count
};

namespace kernels {

// ---------------------------------------------------------------------------
// Limiting kernels
// ---------------------------------------------------------------------------

/// Airy kernel: integral over [0, inf) of Ai(x + s) Ai(y + s).
double k2(double x, double y);

/// k2(x, y) + Ai(x) (1 - airy_tail(y)).
double k12(double x, double y);

/// Extended Airy kernel.
double k2_ext(SpaceTimePoint p1, SpaceTimePoint p2);

/// Extended Airy kernel plus the rank-one source term
/// Ai(xi1) * integral_0^inf exp(-(omega + tau2) s) Ai(xi2 - s) ds.
/// Requires omega + tau2 >= 0; the value 0 gives the conditionally convergent
/// limit 1 - airy_tail(xi2).
double k_transition(SpaceTimePoint p1, SpaceTimePoint p2, double omega);

/// Rank-one source factor integral_0^inf exp(-c s) Ai(xi - s) ds, c >= 0.
double source_term(double xi, double c);

/// Gaussian-regime kernel exp(-X^2/2) / (sqrt(2 pi) B_G), Lambda > 1.
double k_gauss_limit(double X, double lambda);

/// B_G = sqrt((Lambda^2 - 1) / (2 Lambda^2)).
double gauss_scale(double lambda);

/// Blocks [K(tau1, xs[i]; tau2, ys[j])] built from tabulated Airy values.
Eigen::MatrixXd k2_ext_block(double tau1, std::span<const double> xs, double tau2,
                             std::span<const double> ys);
Eigen::MatrixXd transition_block(double tau1, std::span<const double> xs, double tau2,
                                 std::span<const double> ys, double omega);

// ---------------------------------------------------------------------------
// Finite-N kernels
// ---------------------------------------------------------------------------

/// Ornstein-Uhlenbeck transition density between times ti <= tj; zero for
/// ti > tj. Coincident times are a delta function and are rejected.
double phi_ou(double ti, double x, double tj, double y);

/// Kernel of the largest-eigenvalue determinant of H + V with
/// H ~ exp(-tr H^2) and V = diag(eps) (static convention).
double k_finite_static(double x, double y, const SourceSpec& src, const ContourOptions& opts = {});

/// Dynamical kernel for the chain started from exp(-tr H^2 + tr V H),
/// multiplied by exp(y^2 - x^2): the double contour part minus the
/// conjugated propagator, the latter only for t_r < t_s.
double k_finite_dyn(double t_r, double x, double t_s, double y, const SourceSpec& src,
                    const ContourOptions& opts = {});

/// Balanced double contour block
///   exp((x^2 - y^2) / 2) * sqrt(2) e^{(t_r - t_s)/2} / (2 pi i)^2
///   * oint dz int dw prod_l (e^{t_r} w - p_l) / (e^{t_s} z - p_l)
///     * exp(w^2/2 - sqrt2 w x - z^2/2 + sqrt2 z y) / (w e^{t_r - t_s} - z)
/// for every (x, y) in xs x ys, with p_l = eps_prime[l].
Eigen::MatrixXd contour_block(std::span<const double> eps_prime, double t_r,
                              std::span<const double> xs, double t_s, std::span<const double> ys,
                              const ContourOptions& opts);

/// Balanced propagator exp((y^2 - x^2)/2) phi_ou(t_r, x; t_s, y) (0 unless t_r < t_s).
double balanced_phi(double t_r, double x, double t_s, double y);

// ---------------------------------------------------------------------------
// Multiple Hermite functions
// ---------------------------------------------------------------------------

/// Type I function F_{k, eps}(x) (a combination of exp(eps_l x), l <= k + 1).
double mh_first(int k, const SourceSpec& src, double x);

/// Type II function G_{k, eps}(x) (a polynomial of degree k).
double mh_second(int k, const SourceSpec& src, double x);

}  // namespace kernels
}  // namespace pnglab
