#include "pnglab/extended_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pnglab/errors.hpp"

namespace pnglab {
namespace {

template <class... Ts>
struct Overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

// likely position of the largest eigenvalue of H + diag(eps), H ~ exp(-tr H^2)
double static_edge(const std::vector<double>& eps, int n, bool& outlier) {
  double edge = std::sqrt(2.0 * n);
  outlier = false;
  const double critical = std::sqrt(n / 2.0);
  for (double e : eps) {
    if (e > critical) {
      edge = std::max(edge, e + n / (2.0 * e));
      outlier = true;
    }
  }
  return edge;
}

}  // namespace

ExtendedKernel::ExtendedKernel(Variant v, ContourOptions opts) : variant_(std::move(v)), contour_(opts) {}

ExtendedKernel ExtendedKernel::airy() { return ExtendedKernel(Airy{}); }

ExtendedKernel ExtendedKernel::goe2() { return ExtendedKernel(Goe2{}); }

ExtendedKernel ExtendedKernel::transition(double omega) {
  if (!std::isfinite(omega)) throw DomainError("transition kernel: non-finite omega");
  return ExtendedKernel(Transition{omega});
}

ExtendedKernel ExtendedKernel::finite_static(SourceSpec src, ContourOptions opts) {
  src.validate();
  return ExtendedKernel(FiniteStatic{std::move(src)}, opts);
}

ExtendedKernel ExtendedKernel::finite_dynamical(SourceSpec src, std::vector<double> times, ContourOptions opts) {
  src.validate();
  if (times.empty()) throw ConfigurationError("finite dynamical kernel: empty time grid");
  if (times.front() != 0.0) throw ConfigurationError("finite dynamical kernel: time grid must start at 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1]) || !std::isfinite(times[i])) {
      throw ConfigurationError("finite dynamical kernel: times must be strictly increasing");
    }
  }
  return ExtendedKernel(FiniteDynamical{std::move(src), std::move(times)}, opts);
}

ExtendedKernel ExtendedKernel::gauss_limit(double lambda, int n) {
  kernels::gauss_scale(lambda);  // validates Lambda > 1
  if (n < 1) throw ConfigurationError("gauss limit kernel: n must be >= 1");
  return ExtendedKernel(GaussLimit{lambda, n});
}

ExtendedKernel ExtendedKernel::with_contour(ContourOptions opts) const {
  ExtendedKernel k = *this;
  k.contour_ = opts;
  return k;
}

std::string ExtendedKernel::name() const {
  std::ostringstream os;
  std::visit(Overload{
                 [&](const Airy&) { os << "airy"; },
                 [&](const Goe2&) { os << "goe2"; },
                 [&](const Transition& t) { os << "transition(omega=" << t.omega << ")"; },
                 [&](const FiniteStatic& f) { os << "finite-static(N=" << f.source.n << ")"; },
                 [&](const FiniteDynamical& f) {
                   os << "finite-dynamical(N=" << f.source.n << ", M=" << f.times.size() << ")";
                 },
                 [&](const GaussLimit& g) { os << "gauss-limit(Lambda=" << g.lambda << ")"; },
             },
             variant_);
  return os.str();
}

bool ExtendedKernel::is_finite() const noexcept {
  return std::holds_alternative<FiniteStatic>(variant_) || std::holds_alternative<FiniteDynamical>(variant_);
}

bool ExtendedKernel::is_multi_time() const noexcept {
  return std::holds_alternative<Airy>(variant_) || std::holds_alternative<Transition>(variant_) ||
         std::holds_alternative<FiniteDynamical>(variant_);
}

void ExtendedKernel::check_time(double t) const {
  const auto* f = std::get_if<FiniteDynamical>(&variant_);
  if (f == nullptr) return;
  if (std::find(f->times.begin(), f->times.end(), t) == f->times.end()) {
    throw ConfigurationError("finite dynamical kernel: time " + std::to_string(t) + " is not on the grid");
  }
}

double ExtendedKernel::evaluate(SpaceTimePoint p1, SpaceTimePoint p2) const {
  return block(p1.tau, std::span(&p1.xi, 1), p2.tau, std::span(&p2.xi, 1))(0, 0);
}

Eigen::MatrixXd ExtendedKernel::block(double tau1, std::span<const double> xs, double tau2,
                                      std::span<const double> ys) const {
  const auto nx = static_cast<Eigen::Index>(xs.size());
  const auto ny = static_cast<Eigen::Index>(ys.size());
  return std::visit(
      Overload{
          [&](const Airy&) { return kernels::k2_ext_block(tau1, xs, tau2, ys); },
          [&](const Goe2&) { return kernels::transition_block(0.0, xs, 0.0, ys, 0.0); },
          [&](const Transition& t) { return kernels::transition_block(tau1, xs, tau2, ys, t.omega); },
          [&](const FiniteStatic& f) {
            std::vector<double> ep(f.source.epsilons);
            for (double& e : ep) e *= std::numbers::sqrt2;
            return kernels::contour_block(ep, 0.0, xs, 0.0, ys, contour_);
          },
          [&](const FiniteDynamical& f) {
            check_time(tau1);
            check_time(tau2);
            std::vector<double> ep(f.source.epsilons);
            for (double& e : ep) e /= std::numbers::sqrt2;
            Eigen::MatrixXd k = kernels::contour_block(ep, tau1, xs, tau2, ys, contour_);
            if (tau1 < tau2) {
              for (Eigen::Index i = 0; i < nx; ++i)
                for (Eigen::Index j = 0; j < ny; ++j) k(i, j) -= kernels::balanced_phi(tau1, xs[i], tau2, ys[j]);
            }
            return k;
          },
          [&](const GaussLimit&) {
            // rank one: sqrt of the standard normal density at both ends
            Eigen::VectorXd u(nx), v(ny);
            const double c = 1.0 / std::sqrt(std::sqrt(2.0 * std::numbers::pi));
            for (Eigen::Index i = 0; i < nx; ++i) u[i] = c * std::exp(-xs[i] * xs[i] / 4.0);
            for (Eigen::Index j = 0; j < ny; ++j) v[j] = c * std::exp(-ys[j] * ys[j] / 4.0);
            return Eigen::MatrixXd(u * v.transpose());
          },
      },
      variant_);
}

double ExtendedKernel::window_end(double s, double cutoff) const {
  if (!std::isfinite(s)) throw DomainError("window_end: non-finite threshold");
  if (!(cutoff > 0.0)) throw ConfigurationError("window_end: cutoff must be positive");
  return std::visit(
      Overload{
          [&](const FiniteStatic& f) {
            bool outlier = false;
            const double edge = static_edge(f.source.epsilons, f.source.n, outlier);
            double scale = 1.0 / (std::numbers::sqrt2 * std::pow(f.source.n, 1.0 / 6.0));
            if (outlier) scale = std::max(scale, 1.0 / std::numbers::sqrt2);
            return std::max(s, edge) + cutoff * scale;
          },
          [&](const FiniteDynamical& f) {
            // at time t the chain looks like the static model with source e^{-t} eps / 2
            std::vector<double> half(f.source.epsilons);
            for (double& e : half) e /= 2.0;
            bool outlier = false;
            const double edge = static_edge(half, f.source.n, outlier);
            double scale = 1.0 / (std::numbers::sqrt2 * std::pow(f.source.n, 1.0 / 6.0));
            if (outlier) scale = std::max(scale, 1.0 / std::numbers::sqrt2);
            return std::max(s, edge) + cutoff * scale;
          },
          [&](const auto&) { return s + cutoff; },
      },
      variant_);
}

}  // namespace pnglab
