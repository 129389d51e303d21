#pragma once

// Waveform route: band-limited diotic noise plus an interaurally phase-shifted
// tone, and extraction of the instantaneous cues from the analytic signals of
// the two ear signals.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "interaural/random.hpp"
#include "interaural/stimulus.hpp"

namespace interaural {

struct WaveformStimulus {
  double sample_rate_hz = 0.0;
  double center_freq_hz = 0.0;
  double noise_bandwidth_hz = 0.0;
  double duration_s = 0.0;
  std::vector<double> left;   // tone phase +psi/2
  std::vector<double> right;  // tone phase -psi/2
  StimulusParams params;
};

struct CueTrace {
  std::vector<double> time_s;
  std::vector<double> ipd_rad;
  std::vector<double> ild_db;
  std::vector<double> power_p;

  std::size_t size() const { return time_s.size(); }
};

class WaveformError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
struct FftwPlanDestroy {
  void operator()(fftw_plan p) const { fftw_destroy_plan(p); }
};

template <class T>
using fftw_buffer = std::unique_ptr<T[], FftwFree>;
using fftw_plan_ptr = std::unique_ptr<std::remove_pointer_t<fftw_plan>, FftwPlanDestroy>;

template <class T>
fftw_buffer<T> fftw_alloc(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
  if (!p) throw std::bad_alloc();
  return fftw_buffer<T>(p);
}

// Analytic signal of x: negative frequencies removed, positive ones doubled.
inline std::vector<std::complex<double>> analytic_signal(const std::vector<double>& x) {
  const std::size_t n = x.size();
  const std::size_t nh = n / 2 + 1;
  auto in = fftw_alloc<double>(n);
  auto spec = fftw_alloc<fftw_complex>(n);
  std::copy(x.begin(), x.end(), in.get());
  {
    fftw_plan_ptr fwd(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), spec.get(), FFTW_ESTIMATE));
    fftw_execute(fwd.get());
  }
  // r2c fills bins 0..n/2; double 1..(n-1)/2, keep DC and Nyquist, zero the rest.
  for (std::size_t k = 1; k < nh; ++k) {
    if (2 * k == n) continue;
    spec[k][0] *= 2.0;
    spec[k][1] *= 2.0;
  }
  for (std::size_t k = nh; k < n; ++k) spec[k][0] = spec[k][1] = 0.0;
  auto out = fftw_alloc<fftw_complex>(n);
  {
    fftw_plan_ptr inv(fftw_plan_dft_1d(static_cast<int>(n), spec.get(), out.get(), FFTW_BACKWARD,
                                       FFTW_ESTIMATE));
    fftw_execute(inv.get());
  }
  std::vector<std::complex<double>> z(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = {out[i][0] * scale, out[i][1] * scale};
  return z;
}

}  // namespace detail

/// Diotic Gaussian noise with a flat spectrum on [f0 - B/2, f0 + B/2], scaled
/// to sample variance sigma^2, plus a tone of amplitude C at f0 with phase
/// +psi/2 (left) and -psi/2 (right). Noise bins come from substream 0 of `seed`.
inline WaveformStimulus synthesize_waveform(const StimulusParams& params, double sample_rate_hz,
                                            double center_freq_hz, double noise_bandwidth_hz,
                                            double duration_s, std::uint64_t seed,
                                            bool include_noise = true) {
  if (!(sample_rate_hz > 0.0) || !(duration_s > 0.0) || !(noise_bandwidth_hz > 0.0)) {
    throw WaveformError("sample rate, duration and bandwidth must be positive");
  }
  const double lo = center_freq_hz - 0.5 * noise_bandwidth_hz;
  const double hi = center_freq_hz + 0.5 * noise_bandwidth_hz;
  if (!(lo > 0.0) || !(hi < 0.5 * sample_rate_hz)) {
    throw WaveformError("noise band must lie inside (0, fs/2)");
  }
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
  if (n < 16) throw WaveformError("duration too short");

  WaveformStimulus w{sample_rate_hz, center_freq_hz, noise_bandwidth_hz, duration_s, {}, {}, params};
  std::vector<double> noise(n, 0.0);
  if (include_noise) {
    const std::size_t nh = n / 2 + 1;
    auto spec = detail::fftw_alloc<fftw_complex>(nh);
    auto out = detail::fftw_alloc<double>(n);
    SubstreamRng rng(seed, 0);
    const double df = sample_rate_hz / static_cast<double>(n);
    std::size_t used = 0;
    for (std::size_t k = 0; k < nh; ++k) {
      const double f = df * static_cast<double>(k);
      if (f >= lo && f <= hi && k > 0 && 2 * k != n) {
        const auto [g1, g2] = rng.gaussian_pair();
        spec[k][0] = g1;
        spec[k][1] = g2;
        ++used;
      } else {
        spec[k][0] = spec[k][1] = 0.0;
      }
    }
    if (used == 0) throw WaveformError("noise band contains no frequency bins");
    {
      detail::fftw_plan_ptr inv(
          fftw_plan_dft_c2r_1d(static_cast<int>(n), spec.get(), out.get(), FFTW_ESTIMATE));
      fftw_execute(inv.get());
    }
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += out[i];
      sum2 += out[i] * out[i];
    }
    const double mean = sum / static_cast<double>(n);
    const double var = sum2 / static_cast<double>(n) - mean * mean;
    const double scale = std::sqrt(params.noise_variance() / var);
    for (std::size_t i = 0; i < n; ++i) noise[i] = (out[i] - mean) * scale;
  }

  w.left.resize(n);
  w.right.resize(n);
  const double c = params.tone_amplitude();
  const double half = 0.5 * params.tone_ipd();
  const double omega = kTwoPi * center_freq_hz / sample_rate_hz;
  for (std::size_t i = 0; i < n; ++i) {
    const double ph = omega * static_cast<double>(i);
    w.left[i] = noise[i] + c * std::cos(ph + half);
    w.right[i] = noise[i] + c * std::cos(ph - half);
  }
  return w;
}

/// Instantaneous IPD, ILD and P' of a stimulus. The first and last
/// `edge_fraction` of the samples are dropped.
inline CueTrace extract_cues(const WaveformStimulus& stim, double edge_fraction = 0.05) {
  const std::size_t n = stim.left.size();
  if (n != stim.right.size() || n < 16) throw WaveformError("channels must have equal length >= 16");
  auto all_zero = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  };
  if (all_zero(stim.left) || all_zero(stim.right)) throw WaveformError("channel is all zeros");
  if (!(edge_fraction >= 0.0 && edge_fraction < 0.5)) throw WaveformError("edge fraction must be in [0, 0.5)");

  const auto za = detail::analytic_signal(stim.left);
  const auto zb = detail::analytic_signal(stim.right);
  const auto skip = static_cast<std::size_t>(std::floor(edge_fraction * static_cast<double>(n)));
  const double omega = kTwoPi * stim.center_freq_hz / stim.sample_rate_hz;

  CueTrace t;
  const std::size_t m = n - 2 * skip;
  t.time_s.reserve(m);
  t.ipd_rad.reserve(m);
  t.ild_db.reserve(m);
  t.power_p.reserve(m);
  for (std::size_t i = skip; i < n - skip; ++i) {
    const std::complex<double> mix = std::polar(1.0, -omega * static_cast<double>(i));
    const std::complex<double> a = za[i] * mix;
    const std::complex<double> b = zb[i] * mix;
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    t.time_s.push_back(static_cast<double>(i) / stim.sample_rate_hz);
    t.ipd_rad.push_back(std::arg(a * std::conj(b)));
    t.ild_db.push_back(20.0 * std::log10(ma / mb));
    t.power_p.push_back(ma * mb);
  }
  return t;
}

/// Writes a 2-channel 32-bit float RIFF/WAVE file (left, right interleaved).
inline void write_wav(const std::string& path, const WaveformStimulus& stim) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  const auto n = static_cast<std::uint32_t>(stim.left.size());
  const std::uint16_t channels = 2;
  const std::uint16_t bits = 32;
  const auto rate = static_cast<std::uint32_t>(std::llround(stim.sample_rate_hz));
  const std::uint32_t data_bytes = n * channels * (bits / 8);
  auto u32 = [&](std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
  };
  auto u16 = [&](std::uint16_t v) {
    const unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
    os.write(reinterpret_cast<const char*>(b), 2);
  };
  os.write("RIFF", 4);
  u32(36 + data_bytes);
  os.write("WAVEfmt ", 8);
  u32(16);
  u16(3);  // IEEE float
  u16(channels);
  u32(rate);
  u32(rate * channels * (bits / 8));
  u16(static_cast<std::uint16_t>(channels * (bits / 8)));
  u16(bits);
  os.write("data", 4);
  u32(data_bytes);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (double v : {stim.left[i], stim.right[i]}) {
      const auto f = static_cast<float>(v);
      std::uint32_t bitsv;
      std::memcpy(&bitsv, &f, 4);
      u32(bitsv);
    }
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace interaural
