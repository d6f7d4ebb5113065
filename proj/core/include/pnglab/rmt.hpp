#pragma once

#include <vector>

#include <Eigen/Dense>

#include "pnglab/kernels.hpp"
#include "pnglab/random.hpp"

namespace pnglab {

/// Complex Hermitian matrix (the diagonal is real).
struct HermitianMatrix {
  Eigen::MatrixXcd entries;

  int n() const { return static_cast<int>(entries.rows()); }
  /// Throws ConfigurationError unless square, Hermitian to rounding and finite.
  void validate() const;
};

/// Strictly increasing times starting at 0.
struct TimeGrid {
  std::vector<double> times;

  void validate() const;
};

/// Symmetric tridiagonal matrix: diagonal d (size n), off-diagonal b (size n-1).
struct Tridiagonal {
  std::vector<double> d;
  std::vector<double> b;
};

struct EigenDecomposition {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // column k belongs to values[k]
};

namespace rmt {

/// Density proportional to exp(-tr M^2): diagonal N(0, 1/2), real and
/// imaginary off-diagonal parts N(0, 1/4).
HermitianMatrix sample_gue(int n, Rng& rng);

/// Density proportional to exp(-tr M^2 / 2): diagonal N(0, 1), off-diagonal N(0, 1/2).
Eigen::MatrixXd sample_goe(int n, Rng& rng);

/// H + diag(eps) with H from sample_gue (static convention).
HermitianMatrix sample_source_matrix(int n, const SourceSpec& src, Rng& rng);

/// Eigenvalues in ascending order: Householder reduction to a real
/// tridiagonal matrix followed by implicit-shift QL. Throws NumericError when
/// the QL sweep needs more than 50 n iterations.
Eigen::VectorXd eigs_hermitian(const HermitianMatrix& m);
Eigen::VectorXd eigs_symmetric(const Eigen::MatrixXd& m);
EigenDecomposition eigh_hermitian(const HermitianMatrix& m);

/// Eigenvalues of a symmetric tridiagonal matrix (implicit QL), ascending.
Eigen::VectorXd eigs_tridiagonal(Tridiagonal t);

/// Largest eigenvalue of a symmetric tridiagonal matrix by Sturm bisection.
double top_eigenvalue(const Tridiagonal& t);

/// Tridiagonal models with the spectra of sample_gue + diag(eps1, 0, ..., 0)
/// and of sample_goe.
Tridiagonal sample_gue_tridiagonal(int n, Rng& rng, double eps1 = 0.0);
Tridiagonal sample_goe_tridiagonal(int n, Rng& rng);

/// Largest eigenvalue of H + diag(eps). Sources with at most one nonzero
/// entry use the tridiagonal model, others the dense route.
double sample_source_top(int n, const SourceSpec& src, Rng& rng);

/// X = (lambda1 - sqrt(2n)) sqrt(2) n^{1/6}.
double edge_scale(double lambda1, int n);
/// Inverse of edge_scale.
double edge_unscale(double x, int n);
/// (lambda1 - A_G sqrt(n)) / B_G with A_G = (Lambda + 1/Lambda)/sqrt(2); Lambda > 1.
double edge_scale_gaussian(double lambda1, int n, double lambda);
double gaussian_center(double lambda);

/// Chain started from exp(-tr H^2 + tr V H), i.e. V/2 plus sample_gue, and
/// moved by the stationary Ornstein-Uhlenbeck step H -> e^{-dt} H + G with
/// G from sample_gue scaled by sqrt(1 - e^{-2 dt}). Returns the ascending
/// spectrum at every grid time.
std::vector<Eigen::VectorXd> sample_dyson_chain(int n, const SourceSpec& src, const TimeGrid& grid, Rng& rng);

}  // namespace rmt
}  // namespace pnglab
