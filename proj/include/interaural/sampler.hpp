#pragma once

// Direct i.i.d. sampling of the interaural cues from the in-phase and
// quadrature noise components. Samples are produced in fixed-size blocks,
// block b drawing from substream b of the seed, so the output does not
// depend on how many worker threads share the blocks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "interaural/random.hpp"
#include "interaural/stimulus.hpp"

namespace interaural {

/// One instance of the noise components X, Y.
struct IQSample {
  double x = 0.0;
  double y = 0.0;
};

class EmptyRequestError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kSamplerBlock = 1u << 16;

/// Cues for a given noise instance. The +psi/2 ear is the numerator of the
/// interaural ratio.
inline InterauralSample interaural_from_iq(const StimulusParams& params, IQSample n) {
  const double c = params.tone_amplitude();
  const double re = n.x + c * params.half_cos();
  const double a = c * params.half_sin();
  const double im_a = n.y + a;
  const double im_b = n.y - a;
  const double mag_a = std::hypot(re, im_a);
  const double mag_b = std::hypot(re, im_b);
  InterauralSample s;
  // z_a conj(z_b) = re^2 + im_a im_b + i re (im_a - im_b)
  s.ipd_phi = std::atan2(re * (im_a - im_b), re * re + im_a * im_b);
  s.iar_r = mag_a / mag_b;
  s.power_p = mag_a * mag_b;
  s.ild_db = s.iar_r > 0.0 ? 20.0 * std::log10(s.iar_r) : -std::numeric_limits<double>::infinity();
  return s;
}

/// Fills out[first, first + count) with noise instances from block `block`.
inline void fill_iq_block(const StimulusParams& params, std::uint64_t seed, std::uint64_t block,
                          IQSample* out, std::size_t count) {
  SubstreamRng rng(seed, block);
  const double sd = std::sqrt(params.noise_variance());
  for (std::size_t i = 0; i < count; ++i) {
    const auto [g1, g2] = rng.gaussian_pair();
    out[i] = IQSample{sd * g1, sd * g2};
  }
}

namespace detail {

template <class Fn>
void for_each_block(std::size_t n, unsigned workers, Fn&& fn) {
  const std::size_t blocks = (n + kSamplerBlock - 1) / kSamplerBlock;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(blocks)));
  if (workers == 1) {
    for (std::size_t b = 0; b < blocks; ++b) fn(b);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t b = w; b < blocks; b += workers) fn(b);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// n noise instances (x, y), each N(0, sigma^2).
inline std::vector<IQSample> sample_iq(const StimulusParams& params, std::size_t n,
                                       std::uint64_t seed, unsigned workers = 1) {
  if (n == 0) throw EmptyRequestError("sample count must be at least 1");
  std::vector<IQSample> out(n);
  detail::for_each_block(n, workers, [&](std::size_t b) {
    const std::size_t first = b * kSamplerBlock;
    fill_iq_block(params, seed, b, out.data() + first, std::min(kSamplerBlock, n - first));
  });
  return out;
}

/// n i.i.d. realizations of (r, dphi, dl, p').
inline std::vector<InterauralSample> sample_interaural(const StimulusParams& params, std::size_t n,
                                                       std::uint64_t seed, unsigned workers = 1) {
  if (n == 0) throw EmptyRequestError("sample count must be at least 1");
  std::vector<InterauralSample> out(n);
  detail::for_each_block(n, workers, [&](std::size_t b) {
    const std::size_t first = b * kSamplerBlock;
    const std::size_t count = std::min(kSamplerBlock, n - first);
    std::vector<IQSample> iq(count);
    fill_iq_block(params, seed, b, iq.data(), count);
    for (std::size_t i = 0; i < count; ++i) out[first + i] = interaural_from_iq(params, iq[i]);
  });
  return out;
}

}  // namespace interaural
