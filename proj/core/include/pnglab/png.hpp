#pragma once

#include <cstdint>
#include <vector>

#include "pnglab/random.hpp"

namespace pnglab {

/// Discrete PNG droplet with a boundary source.
struct PngParams {
  double q = 0.25;     // bulk nucleation parameter, in (0, 1)
  double alpha = 1.0;  // source strength, in [sqrt q, 1 / sqrt q)
  int n = 1;           // final time is 2n

  /// Throws ConfigurationError on invalid values.
  void validate() const;
};

/// Heights h(r) for r in [-t, t] at integer time t.
struct HeightField {
  int t = 0;
  std::vector<std::int64_t> h = {0};

  std::int64_t at(int r) const { return (r < -t || r > t) ? 0 : h[static_cast<std::size_t>(r + t)]; }
};

/// Layers h_0 >= h_1 >= ... over r in [-t, t].
struct MultiLayerField {
  int t = 0;
  std::vector<std::vector<std::int64_t>> layers;

  static MultiLayerField flat(int num_layers);
  std::int64_t at(std::size_t layer, int r) const;
  /// Number of layers that are not identically zero.
  std::size_t nonempty_layers() const;
};

struct ScalingConstants {
  double a = 0.0, d = 0.0, c = 0.0;
  double a_g = 0.0, d_g = 0.0;  // NaN unless alpha > 1

  static ScalingConstants from(const PngParams& p);
};

namespace png {

/// Nucleation omega(r, t): 0 unless t - |r| > 0 and t - r odd, otherwise
/// geometric with P[k] = (1 - p) p^k, p = alpha sqrt(q) at r = 1 - t and q
/// elsewhere. Draws one uniform exactly when the site can nucleate.
std::int64_t sample_noise(int r, int t, const PngParams& params, Rng& rng);

/// Geometric variate from a given uniform u in (0, 1].
std::int64_t geometric_from_uniform(double u, double p);

/// One step of h(r, t+1) = max(h(r-1, t), h(r, t), h(r+1, t)) + omega(r, t+1).
HeightField evolve(const HeightField& field, const PngParams& params, Rng& rng);

/// The same step with explicit nucleations omega(r, t+1), r in [-t-1, t+1].
HeightField evolve_with(const HeightField& field, const std::vector<std::int64_t>& omega);

/// Field at time 2n from the flat initial condition, driven by make_stream(seed, 0).
HeightField run(const PngParams& params, std::uint64_t seed);
/// The same with a caller-supplied generator.
HeightField run(const PngParams& params, Rng& rng);

/// Multi-layer step. Layer 0 consumes the random numbers exactly like evolve();
/// layer l >= 1 nucleates max(0, min(h_{l-1}(r-1), h_{l-1}(r+1)) - h_{l-1}(r)).
/// Throws ConsistencyError if the layer ordering breaks.
MultiLayerField evolve_multilayer(const MultiLayerField& field, const PngParams& params, Rng& rng);

/// (h0 - a n) / (d n^{1/3}).
double scale_height(std::int64_t h0, const PngParams& params);
/// (h0 - a_G n) / (d_G n^{1/2}); requires alpha > 1.
double scale_height_gaussian(std::int64_t h0, const PngParams& params);

/// Lattice site used for tau: nearest integer to 2 c n^{2/3} tau with the
/// parity of the final time.
int site_for_tau(double tau, const PngParams& params);
/// (h(r, 2n) - a n) / (d n^{1/3}) + tau^2 at r = site_for_tau(tau).
double scale_height_at(const HeightField& field, double tau, const PngParams& params);

}  // namespace png
}  // namespace pnglab
