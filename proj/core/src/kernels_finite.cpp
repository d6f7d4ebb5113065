#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "pnglab/errors.hpp"
#include "pnglab/kernels.hpp"
#include "pnglab/special.hpp"

namespace pnglab {

SourceSpec SourceSpec::zeros(int n) { return from_values(std::vector<double>(std::max(n, 0), 0.0)); }

SourceSpec SourceSpec::from_values(std::vector<double> eps) {
  SourceSpec s{static_cast<int>(eps.size()), std::move(eps)};
  s.validate();
  return s;
}

SourceSpec SourceSpec::rank_one_lambda(int n, double lambda) {
  if (n < 1) throw ConfigurationError("SourceSpec: n must be >= 1");
  auto s = zeros(n);
  s.epsilons[0] = lambda * std::sqrt(n / 2.0);
  s.validate();
  return s;
}

SourceSpec SourceSpec::rank_one_omega(int n, double omega) {
  if (n < 1) throw ConfigurationError("SourceSpec: n must be >= 1");
  auto s = zeros(n);
  s.epsilons[0] = std::sqrt(2.0 * n) * (1.0 - omega * std::pow(n, -1.0 / 3.0));
  s.validate();
  return s;
}

void SourceSpec::validate() const {
  if (n < 1) throw ConfigurationError("SourceSpec: n must be >= 1");
  if (static_cast<int>(epsilons.size()) != n) {
    throw ConfigurationError("SourceSpec: expected " + std::to_string(n) + " entries, got " +
                             std::to_string(epsilons.size()));
  }
  for (double e : epsilons) {
    if (!std::isfinite(e)) throw ConfigurationError("SourceSpec: non-finite entry");
  }
}

double SourceSpec::max_epsilon() const {
  return epsilons.empty() ? 0.0 : *std::max_element(epsilons.begin(), epsilons.end());
}

namespace kernels {
namespace {

using cd = std::complex<double>;
constexpr double kSqrt2 = std::numbers::sqrt2;
// integrand values more than this many nats below the peak are dropped
constexpr double kDynamicRange = 46.0;

struct Poles {
  std::vector<double> value;
  std::vector<double> mult;
};

Poles group_poles(std::span<const double> p) {
  Poles g;
  for (double v : p) {
    auto it = std::find(g.value.begin(), g.value.end(), v);
    if (it == g.value.end()) {
      g.value.push_back(v);
      g.mult.push_back(1.0);
    } else {
      g.mult[it - g.value.begin()] += 1.0;
    }
  }
  return g;
}

// log of the w-integrand of row x (with the exp(x^2/2) balancing factor) and
// its w-derivative
struct RowFn {
  const Poles& poles;
  double scale;  // e^{t_r}
  double x;

  cd log_value(cd w) const {
    cd s = w * w / 2.0 - kSqrt2 * w * x + x * x / 2.0;
    for (std::size_t l = 0; l < poles.value.size(); ++l) s += poles.mult[l] * std::log(scale * w - poles.value[l]);
    return s;
  }
  cd derivative(cd w) const {
    cd d = w - kSqrt2 * x;
    for (std::size_t l = 0; l < poles.value.size(); ++l) d += poles.mult[l] * scale / (scale * w - poles.value[l]);
    return d;
  }
  // |derivative| with each zero's term capped at unit distance; polynomial
  // factors are resolved by the panel rule regardless
  double rate(cd w) const {
    cd d = w - kSqrt2 * x;
    for (std::size_t l = 0; l < poles.value.size(); ++l) {
      cd u = scale * w - poles.value[l];
      if (std::abs(u) < scale) u *= scale / std::max(std::abs(u), 1e-300);
      d += poles.mult[l] * scale / u;
    }
    return std::abs(d);
  }
};

// the same for the z-integrand of column y (exp(-y^2/2) balancing)
struct ColFn {
  const Poles& poles;
  double scale;  // e^{t_s}
  double y;

  cd log_value(cd z) const {
    cd s = -z * z / 2.0 + kSqrt2 * z * y - y * y / 2.0;
    for (std::size_t l = 0; l < poles.value.size(); ++l) s -= poles.mult[l] * std::log(scale * z - poles.value[l]);
    return s;
  }
  cd derivative(cd z) const {
    cd d = -z + kSqrt2 * y;
    for (std::size_t l = 0; l < poles.value.size(); ++l) d -= poles.mult[l] * scale / (scale * z - poles.value[l]);
    return d;
  }
};

struct Geometry {
  double center = 0.0;
  double radius = 0.0;
  bool saddle_lines = true;  // per-row lines through the w saddle
  double fixed_line = 0.0;   // abscissa used when saddle_lines is false
};

Geometry make_geometry(const Poles& zp, std::size_t n, double delta, const ContourOptions& opts) {
  Geometry g;
  double pmax = 0.0, pmin = 0.0, pabs = 0.0;
  for (double p : zp.value) {
    pmax = std::max(pmax, p);
    pmin = std::min(pmin, p);
    pabs = std::max(pabs, std::fabs(p));
  }
  if (opts.geometry == ContourGeometry::Saddle) {
    if (!(opts.gap > 0.0)) throw ConfigurationError("contour gap must be positive");
    const double gap = opts.gap * std::max(1.0, std::pow(static_cast<double>(n), 1.0 / 6.0));
    g.center = 0.0;
    g.radius = std::max(std::sqrt(static_cast<double>(n)), pabs + gap);
    return g;
  }
  if (!(opts.shift > 0.0)) throw ConfigurationError("contour shift must be positive");
  const double h = kSqrt2 * opts.shift;
  g.center = pmax / 2.0 + h / 4.0;
  g.radius = g.center + h / 2.0;
  if (pmin <= g.center - g.radius) {
    throw ConfigurationError("shifted-line contour: pole at " + std::to_string(pmin) +
                             " lies outside the circle; use the saddle geometry");
  }
  g.saddle_lines = false;
  g.fixed_line = -std::exp(-delta) * h;
  return g;
}

// real part of the saddle point of w^2/2 - sqrt2 w x + n log w on the branch
// where vertical lines are descent directions
double saddle_abscissa(double x, std::size_t n) {
  const double disc = 2.0 * x * x - 4.0 * static_cast<double>(n);
  if (disc <= 0.0) return x / kSqrt2;
  return (kSqrt2 * x + std::copysign(std::sqrt(disc), x)) / 2.0;
}

struct LineScan {
  double lower = 0.0, upper = 0.0;  // s-range
  double peak = -std::numeric_limits<double>::infinity();
  double rate = 0.0;
};

LineScan scan_line(const RowFn& f, double a, double min_reach) {
  LineScan out;
  const double step = 0.25;
  for (int dir : {1, -1}) {
    double run_max = -std::numeric_limits<double>::infinity();
    double s_at_max = 0.0;
    double s = 0.0;
    double reach = 0.0;
    for (int k = 0; k < 4000; ++k, s += dir * step) {
      const cd w(a, s);
      const double v = f.log_value(w).real();
      if (v > run_max) {
        run_max = v;
        s_at_max = s;
      }
      reach = s;
      if (v < run_max - kDynamicRange && std::fabs(s) > std::fabs(s_at_max) + 1.0 && std::fabs(s) > min_reach) break;
    }
    out.peak = std::max(out.peak, run_max);
    if (dir > 0) out.upper = reach;
    else out.lower = reach;
  }
  // largest log-derivative where the integrand is significant
  for (double s = out.lower; s <= out.upper; s += step) {
    const cd w(a, s);
    if (f.log_value(w).real() > out.peak - kDynamicRange) out.rate = std::max(out.rate, f.rate(w));
  }
  return out;
}

}  // namespace

// The w-lines may cross the z-circle. For every w the z-integral is replaced
// by its continuation from outside the circle,
//   oint (F(z) - F(zeta)) / (zeta - z) dz,  zeta = w e^{t_r - t_s},
// which is analytic in w; the subtracted piece F(zeta) times the discrete
// oint dz / (zeta - z) is folded in through the residue function r(w).
Eigen::MatrixXd contour_block(std::span<const double> eps_prime, double t_r, std::span<const double> xs,
                              double t_s, std::span<const double> ys, const ContourOptions& opts) {
  if (eps_prime.empty()) throw ConfigurationError("contour_block: empty source");
  if (opts.refinement < 1 || opts.line_order < 2 || opts.circle_nodes < 0) {
    throw ConfigurationError("contour_block: invalid discretization options");
  }
  for (double v : xs) if (!std::isfinite(v)) throw DomainError("contour_block: non-finite x");
  for (double v : ys) if (!std::isfinite(v)) throw DomainError("contour_block: non-finite y");
  if (!std::isfinite(t_r) || !std::isfinite(t_s)) throw DomainError("contour_block: non-finite time");

  const std::size_t n = eps_prime.size();
  const Poles poles = group_poles(eps_prime);
  const double er = std::exp(t_r), es = std::exp(t_s);
  const double delta = t_r - t_s;
  const double ed = std::exp(delta);
  Poles zpoles = poles;
  for (double& p : zpoles.value) p /= es;
  const Geometry geo = make_geometry(zpoles, n, delta, opts);

  const auto nx = static_cast<Eigen::Index>(xs.size());
  const auto ny = static_cast<Eigen::Index>(ys.size());
  double ymax = 0.0;
  for (double v : ys) ymax = std::max(ymax, std::fabs(v));

  // ---- circle nodes, shared by all columns
  int m_nodes = opts.circle_nodes;
  if (m_nodes == 0) {
    const int probe = 2048;
    std::vector<double> vals(probe);
    double fmax = 0.0;
    for (Eigen::Index j = 0; j < ny; ++j) {
      const ColFn f{poles, es, ys[j]};
      double col_top = -std::numeric_limits<double>::infinity();
      for (int b = 0; b < probe; ++b) {
        const cd z = geo.center + std::polar(geo.radius, 2.0 * std::numbers::pi * b / probe);
        vals[b] = f.log_value(z).real();
        col_top = std::max(col_top, vals[b]);
      }
      for (int b = 0; b < probe; ++b) {
        if (vals[b] > col_top - kDynamicRange) {
          const cd z = geo.center + std::polar(geo.radius, 2.0 * std::numbers::pi * b / probe);
          fmax = std::max(fmax, geo.radius * std::abs(f.derivative(z)));
        }
      }
    }
    m_nodes = static_cast<int>(std::max(256.0, 2.0 * fmax + 64.0));
    m_nodes = (m_nodes + 7) / 8 * 8;
  }
  m_nodes *= opts.refinement;

  std::vector<cd> z(m_nodes), dz(m_nodes);
  for (int b = 0; b < m_nodes; ++b) {
    const cd e = std::polar(1.0, 2.0 * std::numbers::pi * b / m_nodes);
    z[b] = geo.center + geo.radius * e;
    dz[b] = cd(0.0, 2.0 * std::numbers::pi / m_nodes) * geo.radius * e;
  }

  // column factors normalized by their largest modulus
  Eigen::MatrixXcd beta(m_nodes, ny);
  Eigen::VectorXd col_shift(ny);
  {
    std::vector<cd> lv(m_nodes);
    for (Eigen::Index j = 0; j < ny; ++j) {
      const ColFn f{poles, es, ys[j]};
      double mx = -std::numeric_limits<double>::infinity();
      for (int b = 0; b < m_nodes; ++b) {
        lv[b] = f.log_value(z[b]);
        mx = std::max(mx, lv[b].real());
      }
      col_shift[j] = mx;
      for (int b = 0; b < m_nodes; ++b) beta(b, j) = std::exp(lv[b] - mx) * dz[b];
    }
  }

  // discrete oint dz / (zeta - z) on the trapezoid nodes, in closed form
  const auto cauchy_sum = [&](cd zeta) -> cd {
    const cd q = std::log((zeta - geo.center) / geo.radius) * static_cast<double>(m_nodes);
    if (q.real() > 700.0) return 0.0;
    if (q.real() < -700.0) return cd(0.0, -2.0 * std::numbers::pi);
    return cd(0.0, 2.0 * std::numbers::pi) / (std::exp(q) - 1.0);
  };

  const special::Quadrature unit = special::gauss_legendre(opts.line_order, -1.0, 1.0);
  Eigen::MatrixXcd v(nx, m_nodes);
  Eigen::VectorXd row_shift(nx);
  Eigen::MatrixXcd corr = Eigen::MatrixXcd::Zero(nx, ny);
  for (Eigen::Index i = 0; i < nx; ++i) {
    const RowFn f{poles, er, xs[i]};
    const double a = geo.saddle_lines ? saddle_abscissa(xs[i], n) : geo.fixed_line;
    // ordinates where zeta = w e^delta lies inside the circle
    const double inside = std::sqrt(std::max(0.0, geo.radius * geo.radius - std::pow(a * ed - geo.center, 2))) / ed;
    const LineScan sc = scan_line(f, a, inside + 1.0);
    double width = opts.line_panel;
    if (width <= 0.0) {
      double rate = sc.rate;
      if (inside > 0.0) {
        // oscillation of the residue function on the crossing segment
        const double amax = std::hypot(a, inside);
        rate = std::max(rate, std::fabs(1.0 - ed * ed) * amax + kSqrt2 * (std::fabs(xs[i]) + ed * ymax));
      }
      width = std::min(2.0, 8.0 / std::max(rate, 1e-3));
    }
    const int panels = std::max(1, static_cast<int>(std::ceil((sc.upper - sc.lower) / width))) * opts.refinement;
    const double h = (sc.upper - sc.lower) / panels;

    const std::size_t nw = static_cast<std::size_t>(panels) * unit.size();
    std::vector<cd> w, alpha, lw;
    w.reserve(nw);
    alpha.reserve(nw);
    lw.reserve(nw);
    double mx = -std::numeric_limits<double>::infinity();
    for (int p = 0; p < panels; ++p) {
      const double mid = sc.lower + (p + 0.5) * h;
      for (std::size_t k = 0; k < unit.size(); ++k) {
        const cd wk(a, mid + 0.5 * h * unit.nodes[k]);
        w.push_back(wk);
        lw.push_back(f.log_value(wk));
        mx = std::max(mx, lw.back().real());
        alpha.push_back(cd(0.0, 0.5 * h * unit.weights[k]));  // dw = i ds
      }
    }
    row_shift[i] = mx;

    for (int b = 0; b < m_nodes; ++b) v(i, b) = 0.0;
    for (std::size_t k = 0; k < nw; ++k) {
      const cd ak = alpha[k] * std::exp(lw[k] - mx);
      const cd zeta = w[k] * ed;
      for (int b = 0; b < m_nodes; ++b) v(i, b) += ak / (zeta - z[b]);

      const cd sk = cauchy_sum(zeta);
      if (sk == 0.0) continue;
      // r(w) = exp(w^2/2 - sqrt2 w x + x^2/2 - zeta^2/2 + sqrt2 zeta y - y^2/2)
      const cd row_part = w[k] * w[k] / 2.0 - kSqrt2 * w[k] * xs[i] + xs[i] * xs[i] / 2.0 - zeta * zeta / 2.0;
      for (Eigen::Index j = 0; j < ny; ++j) {
        corr(i, j) += alpha[k] * sk * std::exp(row_part + kSqrt2 * zeta * ys[j] - ys[j] * ys[j] / 2.0);
      }
    }
  }

  const Eigen::MatrixXcd s = v * beta;
  const double pref = -kSqrt2 / (4.0 * std::numbers::pi * std::numbers::pi) * std::exp(0.5 * delta);
  Eigen::MatrixXd k(nx, ny);
  for (Eigen::Index i = 0; i < nx; ++i) {
    for (Eigen::Index j = 0; j < ny; ++j) {
      k(i, j) = pref * (s(i, j) * std::exp(row_shift[i] + col_shift[j]) - corr(i, j)).real();
    }
  }
  return k;
}

double phi_ou(double ti, double x, double tj, double y) {
  if (!std::isfinite(ti) || !std::isfinite(tj) || !std::isfinite(x) || !std::isfinite(y)) {
    throw DomainError("phi_ou: non-finite argument");
  }
  if (ti > tj) return 0.0;
  if (ti == tj) throw DomainError("phi_ou: coincident times give a delta function");
  const double a = std::exp(ti - tj);
  const double v = 1.0 - a * a;
  const double d = y - a * x;
  return std::sqrt(a / (std::numbers::pi * v)) * std::exp(-d * d / v);
}

double balanced_phi(double t_r, double x, double t_s, double y) {
  if (!(t_r < t_s)) return 0.0;
  const double a = std::exp(t_r - t_s);
  const double v = 1.0 - a * a;
  const double d = y - a * x;
  return std::exp(0.5 * std::log(a / (std::numbers::pi * v)) - d * d / v + (y * y - x * x) / 2.0);
}

double k_finite_static(double x, double y, const SourceSpec& src, const ContourOptions& opts) {
  src.validate();
  std::vector<double> ep(src.epsilons);
  for (double& e : ep) e *= kSqrt2;
  const double bal = contour_block(ep, 0.0, std::span(&x, 1), 0.0, std::span(&y, 1), opts)(0, 0);
  return bal * std::exp((y * y - x * x) / 2.0);
}

double k_finite_dyn(double t_r, double x, double t_s, double y, const SourceSpec& src,
                    const ContourOptions& opts) {
  src.validate();
  std::vector<double> ep(src.epsilons);
  for (double& e : ep) e /= kSqrt2;
  const double bal = contour_block(ep, t_r, std::span(&x, 1), t_s, std::span(&y, 1), opts)(0, 0) -
                     balanced_phi(t_r, x, t_s, y);
  return bal * std::exp((y * y - x * x) / 2.0);
}

}  // namespace kernels
}  // namespace pnglab
