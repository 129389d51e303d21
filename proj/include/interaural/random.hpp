#pragma once

// Reproducible random streams.
//
// Generator: std::mt19937_64, seeded through std::seed_seq with the 64-bit
// user seed and a 64-bit substream index (both split into 32-bit words).
// Uniforms take the top 53 bits; Gaussians use the Box-Muller transform and
// yield one (x, y) pair per two uniforms. std::normal_distribution is not
// used because its algorithm is implementation-defined.

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

namespace interaural {

class SubstreamRng {
 public:
  SubstreamRng(std::uint64_t seed, std::uint64_t substream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(substream & 0xffffffffu),
                      static_cast<std::uint32_t>(substream >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t next_bits() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_zero() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

  /// Two independent standard normal variates.
  std::pair<double, double> gaussian_pair() {
    const double u1 = uniform_open_zero();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * 3.14159265358979323846 * u2;
    return {rad * std::cos(ang), rad * std::sin(ang)};
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace interaural
