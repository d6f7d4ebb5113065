#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>

#include "pnglab/errors.hpp"
#include "pnglab/rmt.hpp"

namespace pnglab {

void HermitianMatrix::validate() const {
  if (entries.rows() != entries.cols()) throw ConfigurationError("HermitianMatrix: not square");
  if (!entries.allFinite()) throw ConfigurationError("HermitianMatrix: non-finite entries");
  const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
  if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ConfigurationError("HermitianMatrix: not Hermitian");
  }
}

namespace rmt {
namespace {

using cd = std::complex<double>;

// Implicit-shift QL on diagonal d and off-diagonal e (e[i] couples i and
// i+1, e.size() == d.size()). Rotations are applied to the columns of z.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, Eigen::MatrixXd* z) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return;
  e.resize(static_cast<std::size_t>(n), 0.0);
  e[n - 1] = 0.0;
  const long cap = 50L * n;
  long iterations = 0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iterations > cap) {
        throw NumericError("eigen solver: QL did not converge within " + std::to_string(cap) + " iterations");
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (int i = m - 1; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        if (z != nullptr) {
          for (Eigen::Index k = 0; k < z->rows(); ++k) {
            f = (*z)(k, i + 1);
            (*z)(k, i + 1) = s * (*z)(k, i) + c * f;
            (*z)(k, i) = c * (*z)(k, i) - s * f;
          }
        }
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
}

// Householder reduction A = Q T Q^* with T tridiagonal. On return d, e hold
// the real tridiagonal D^* T D (nonnegative off-diagonal) and, if requested,
// qd = Q D.
void tridiagonalize(Eigen::MatrixXcd a, std::vector<double>& d, std::vector<double>& e, Eigen::MatrixXcd* qd) {
  const Eigen::Index n = a.rows();
  if (qd != nullptr) *qd = Eigen::MatrixXcd::Identity(n, n);
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index len = n - k - 1;
    Eigen::VectorXcd v = a.block(k + 1, k, len, 1);
    const double xnorm = v.norm();
    if (xnorm == 0.0) continue;
    const cd x0 = v[0];
    const cd phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cd(1.0);
    const cd alpha = -phase * xnorm;
    v[0] -= alpha;
    const double vn = v.norm();
    if (vn == 0.0) continue;
    v /= vn;

    auto sub = a.block(k + 1, k + 1, len, len);
    const Eigen::VectorXcd p = sub * v;
    const double kk = v.dot(p).real();
    const Eigen::VectorXcd w = p - kk * v;
    sub -= 2.0 * (v * w.adjoint() + w * v.adjoint());
    a.block(k + 1, k, len, 1).setZero();
    a.block(k, k + 1, 1, len).setZero();
    a(k + 1, k) = alpha;
    a(k, k + 1) = std::conj(alpha);

    if (qd != nullptr) {
      auto cols = qd->block(0, k + 1, n, len);
      const Eigen::VectorXcd u = cols * v;
      cols -= 2.0 * u * v.adjoint();
    }
  }
  d.resize(static_cast<std::size_t>(n));
  e.assign(static_cast<std::size_t>(n), 0.0);
  cd ph = 1.0;
  std::vector<cd> phases(static_cast<std::size_t>(n), cd(1.0));
  for (Eigen::Index k = 0; k < n; ++k) {
    d[k] = a(k, k).real();
    if (k + 1 < n) {
      const cd off = a(k + 1, k);
      const double mag = std::abs(off);
      e[k] = mag;
      if (mag > 0.0) ph *= off / mag;
      phases[k + 1] = ph;
    }
  }
  if (qd != nullptr) {
    for (Eigen::Index k = 0; k < n; ++k) qd->col(k) *= phases[k];
  }
}

}  // namespace

Eigen::VectorXd eigs_tridiagonal(Tridiagonal t) {
  if (!t.d.empty() && t.b.size() + 1 != t.d.size()) throw ConfigurationError("tridiagonal: size mismatch");
  ql_implicit(t.d, t.b, nullptr);
  std::sort(t.d.begin(), t.d.end());
  return Eigen::Map<Eigen::VectorXd>(t.d.data(), static_cast<Eigen::Index>(t.d.size()));
}

Eigen::VectorXd eigs_hermitian(const HermitianMatrix& m) {
  m.validate();
  std::vector<double> d, e;
  tridiagonalize(m.entries, d, e, nullptr);
  ql_implicit(d, e, nullptr);
  std::sort(d.begin(), d.end());
  return Eigen::Map<Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size()));
}

Eigen::VectorXd eigs_symmetric(const Eigen::MatrixXd& m) {
  return eigs_hermitian(HermitianMatrix{m.cast<cd>()});
}

EigenDecomposition eigh_hermitian(const HermitianMatrix& m) {
  m.validate();
  const Eigen::Index n = m.entries.rows();
  std::vector<double> d, e;
  Eigen::MatrixXcd qd;
  tridiagonalize(m.entries, d, e, &qd);
  Eigen::MatrixXd z = Eigen::MatrixXd::Identity(n, n);
  ql_implicit(d, e, &z);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return d[i] < d[j]; });
  EigenDecomposition out;
  out.values.resize(n);
  const Eigen::MatrixXcd v = qd * z.cast<cd>();
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = d[order[k]];
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

double top_eigenvalue(const Tridiagonal& t) {
  const std::size_t n = t.d.size();
  if (n == 0) throw ConfigurationError("top_eigenvalue: empty matrix");
  if (t.b.size() + 1 != n) throw ConfigurationError("tridiagonal: size mismatch");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::fabs(t.b[i - 1]) : 0.0) + (i + 1 < n ? std::fabs(t.b[i]) : 0.0);
    lo = std::min(lo, t.d[i] - r);
    hi = std::max(hi, t.d[i] + r);
  }
  const double tiny = std::numeric_limits<double>::min();
  // number of eigenvalues below x
  const auto below = [&](double x) {
    std::size_t count = 0;
    double q = t.d[0] - x;
    for (std::size_t i = 0;;) {
      if (q == 0.0) q = -tiny;
      if (q < 0.0) ++count;
      if (++i == n) break;
      q = t.d[i] - x - t.b[i - 1] * t.b[i - 1] / q;
    }
    return count;
  };
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 2.0 * eps * std::max(std::fabs(lo), std::fabs(hi)) + tiny || mid <= lo || mid >= hi) break;
    if (below(mid) == n) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace rmt
}  // namespace pnglab
