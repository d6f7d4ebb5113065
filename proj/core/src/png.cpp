#include "pnglab/png.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pnglab/errors.hpp"

namespace pnglab {

void PngParams::validate() const {
  if (!(q > 0.0 && q < 1.0)) throw ConfigurationError("PngParams: q must lie in (0, 1)");
  const double sq = std::sqrt(q);
  if (!std::isfinite(alpha) || alpha < sq || alpha * sq >= 1.0) {
    throw ConfigurationError("PngParams: alpha must lie in [sqrt(q), 1/sqrt(q))");
  }
  if (n < 1) throw ConfigurationError("PngParams: n must be >= 1");
}

MultiLayerField MultiLayerField::flat(int num_layers) {
  if (num_layers < 1) throw ConfigurationError("MultiLayerField: need at least one layer");
  MultiLayerField f;
  f.layers.assign(static_cast<std::size_t>(num_layers), std::vector<std::int64_t>{0});
  return f;
}

std::int64_t MultiLayerField::at(std::size_t layer, int r) const {
  if (r < -t || r > t) return 0;
  return layers[layer][static_cast<std::size_t>(r + t)];
}

std::size_t MultiLayerField::nonempty_layers() const {
  std::size_t k = 0;
  for (const auto& l : layers) {
    if (std::any_of(l.begin(), l.end(), [](std::int64_t v) { return v != 0; })) ++k;
  }
  return k;
}

ScalingConstants ScalingConstants::from(const PngParams& p) {
  p.validate();
  const double q = p.q, sq = std::sqrt(q), al = p.alpha;
  ScalingConstants s;
  s.a = 2.0 * sq / (1.0 - sq);
  s.d = std::cbrt(1.0 + sq) * std::pow(q, 1.0 / 6.0) / (1.0 - sq);
  s.c = std::pow(1.0 + sq, 2.0 / 3.0) / std::pow(q, 1.0 / 6.0);
  if (al > 1.0) {
    s.a_g = sq * (1.0 - 2.0 * al * sq + al * al) / ((al - sq) * (1.0 - al * sq));
    s.d_g = std::sqrt(al) * std::pow(q, 0.25) * std::sqrt(1.0 - q) * std::sqrt(al * al - 1.0) /
            ((1.0 - al * sq) * (al - sq));
  } else {
    s.a_g = s.d_g = std::numeric_limits<double>::quiet_NaN();
  }
  return s;
}

namespace png {

std::int64_t geometric_from_uniform(double u, double p) {
  if (p <= 0.0) return 0;
  return static_cast<std::int64_t>(std::floor(std::log(u) / std::log(p)));
}

std::int64_t sample_noise(int r, int t, const PngParams& params, Rng& rng) {
  if (t - std::abs(r) <= 0 || (t - r) % 2 == 0) return 0;
  const double p = (r == 1 - t) ? params.alpha * std::sqrt(params.q) : params.q;
  return geometric_from_uniform(uniform_open_closed(rng), p);
}

HeightField evolve_with(const HeightField& field, const std::vector<std::int64_t>& omega) {
  const int t = field.t + 1;
  if (omega.size() != static_cast<std::size_t>(2 * t + 1)) {
    throw ConfigurationError("evolve_with: expected " + std::to_string(2 * t + 1) + " nucleation values");
  }
  HeightField out;
  out.t = t;
  out.h.assign(static_cast<std::size_t>(2 * t + 1), 0);
  for (int r = -t; r <= t; ++r) {
    const std::int64_t m = std::max({field.at(r - 1), field.at(r), field.at(r + 1)});
    out.h[static_cast<std::size_t>(r + t)] = m + omega[static_cast<std::size_t>(r + t)];
  }
  return out;
}

namespace {

std::vector<std::int64_t> draw_nucleations(int t, const PngParams& params, Rng& rng) {
  std::vector<std::int64_t> omega(static_cast<std::size_t>(2 * t + 1), 0);
  for (int r = -t; r <= t; ++r) omega[static_cast<std::size_t>(r + t)] = sample_noise(r, t, params, rng);
  return omega;
}

}  // namespace

HeightField evolve(const HeightField& field, const PngParams& params, Rng& rng) {
  return evolve_with(field, draw_nucleations(field.t + 1, params, rng));
}

HeightField run(const PngParams& params, Rng& rng) {
  params.validate();
  HeightField f;
  for (int s = 0; s < 2 * params.n; ++s) f = evolve(f, params, rng);
  return f;
}

HeightField run(const PngParams& params, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  return run(params, rng);
}

MultiLayerField evolve_multilayer(const MultiLayerField& field, const PngParams& params, Rng& rng) {
  if (field.layers.empty()) throw ConfigurationError("evolve_multilayer: no layers");
  const int t = field.t + 1;
  const auto width = static_cast<std::size_t>(2 * t + 1);
  MultiLayerField out;
  out.t = t;
  out.layers.resize(field.layers.size());

  std::vector<std::int64_t> omega = draw_nucleations(t, params, rng);
  for (std::size_t l = 0; l < field.layers.size(); ++l) {
    if (l > 0) {
      for (int r = -t; r <= t; ++r) {
        const std::int64_t lost =
            std::min(field.at(l - 1, r - 1), field.at(l - 1, r + 1)) - field.at(l - 1, r);
        omega[static_cast<std::size_t>(r + t)] = std::max<std::int64_t>(0, lost);
      }
    }
    auto& h = out.layers[l];
    h.assign(width, 0);
    for (int r = -t; r <= t; ++r) {
      const std::int64_t m = std::max({field.at(l, r - 1), field.at(l, r), field.at(l, r + 1)});
      h[static_cast<std::size_t>(r + t)] = m + omega[static_cast<std::size_t>(r + t)];
    }
    if (l > 0) {
      for (std::size_t i = 0; i < width; ++i) {
        if (h[i] > out.layers[l - 1][i]) {
          throw ConsistencyError("multilayer PNG: layer " + std::to_string(l) + " exceeds layer " +
                                 std::to_string(l - 1) + " at r=" + std::to_string(static_cast<int>(i) - t) +
                                 ", t=" + std::to_string(t));
        }
      }
    }
  }
  return out;
}

double scale_height(std::int64_t h0, const PngParams& params) {
  const ScalingConstants s = ScalingConstants::from(params);
  return (static_cast<double>(h0) - s.a * params.n) / (s.d * std::cbrt(static_cast<double>(params.n)));
}

double scale_height_gaussian(std::int64_t h0, const PngParams& params) {
  params.validate();
  if (!(params.alpha > 1.0)) throw DomainError("scale_height_gaussian requires alpha > 1");
  const ScalingConstants s = ScalingConstants::from(params);
  return (static_cast<double>(h0) - s.a_g * params.n) / (s.d_g * std::sqrt(static_cast<double>(params.n)));
}

int site_for_tau(double tau, const PngParams& params) {
  if (!std::isfinite(tau)) throw DomainError("site_for_tau: non-finite tau");
  const ScalingConstants s = ScalingConstants::from(params);
  const double x = 2.0 * s.c * std::pow(static_cast<double>(params.n), 2.0 / 3.0) * tau;
  // final time 2n is even: nearest even integer
  const double r = 2.0 * std::round(x / 2.0);
  if (std::fabs(r) > 2.0 * params.n) {
    throw DomainError("scale_height_at: tau=" + std::to_string(tau) + " lies outside the light cone");
  }
  return static_cast<int>(r);
}

double scale_height_at(const HeightField& field, double tau, const PngParams& params) {
  if (field.t != 2 * params.n) throw ConfigurationError("scale_height_at: field is not at time 2n");
  const int r = site_for_tau(tau, params);
  return scale_height(field.at(r), params) + tau * tau;
}

}  // namespace png
}  // namespace pnglab
