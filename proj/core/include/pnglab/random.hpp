#pragma once

#include <cstdint>
#include <random>

namespace pnglab {

using Rng = std::mt19937_64;

/// Generator for sample `stream` of an experiment with master `seed`.
///
/// Every Monte Carlo sample owns its own stream, so the sample values do not
/// depend on how samples are distributed over workers.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

/// Uniform variate on (0, 1]; never returns 0 so log(u) is finite.
inline double uniform_open_closed(Rng& rng) {
  return 1.0 - static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace pnglab
