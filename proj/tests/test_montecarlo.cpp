#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "interaural/histogram.hpp"
#include "interaural/model_cdf.hpp"
#include "interaural/random.hpp"
#include "interaural/sampler.hpp"
#include "interaural/waveform.hpp"

using namespace interaural;

TEST(Sampler, ZeroNoiseInstant) {
  for (double psi : {kPi / 3, kPi / 2, kPi, -1.0}) {
    const StimulusParams p(1.3, psi, 1.0);
    const auto s = interaural_from_iq(p, {0.0, 0.0});
    EXPECT_NEAR(s.iar_r, 1.0, 1e-15);
    EXPECT_NEAR(s.ipd_phi, p.tone_ipd(), 1e-15);
    EXPECT_NEAR(s.power_p, p.tone_power(), 1e-15);
    EXPECT_NEAR(s.ild_db, 0.0, 1e-13);
  }
}

TEST(Sampler, AntiphasicInstant) {
  const StimulusParams p(1.0, kPi / 2, 1.0);
  const auto s = interaural_from_iq(p, {-p.tone_amplitude() * p.half_cos(), 0.0});
  EXPECT_NEAR(std::abs(s.ipd_phi), kPi, 1e-15);
  EXPECT_NEAR(s.iar_r, 1.0, 1e-15);
}

TEST(Sampler, EmptyRequest) {
  const StimulusParams p(1.0, 1.0, 1.0);
  EXPECT_THROW(sample_interaural(p, 0, 1), EmptyRequestError);
  EXPECT_THROW(sample_iq(p, 0, 1), EmptyRequestError);
}

TEST(Sampler, DeterministicAndWorkerIndependent) {
  const auto p = StimulusParams::from_snr_db(-3.0, 2.0);
  const std::size_t n = 3 * kSamplerBlock + 123;
  const auto a = sample_interaural(p, n, 99, 1);
  const auto b = sample_interaural(p, n, 99, 1);
  const auto c = sample_interaural(p, n, 99, 3);
  const auto d = sample_interaural(p, n, 100, 1);
  ASSERT_EQ(a.size(), n);
  bool differs = false;
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_EQ(std::memcmp(&a[i], &b[i], sizeof a[i]), 0);
    EXPECT_EQ(std::memcmp(&a[i], &c[i], sizeof a[i]), 0);
    differs = differs || a[i].ipd_phi != d[i].ipd_phi;
  }
  EXPECT_TRUE(differs);
  // A prefix of a longer request is the shorter request.
  const auto e = sample_interaural(p, 1000, 99);
  for (std::size_t i = 0; i < e.size(); ++i) EXPECT_EQ(e[i].power_p, a[i].power_p);
}

TEST(Sampler, GaussianMoments) {
  const StimulusParams p(1.0, 1.0, 2.5);
  const auto iq = sample_iq(p, 1'000'000, 5);
  double mx = 0, my = 0, vx = 0, vy = 0, cxy = 0;
  for (const auto& s : iq) {
    mx += s.x;
    my += s.y;
  }
  mx /= iq.size();
  my /= iq.size();
  for (const auto& s : iq) {
    vx += (s.x - mx) * (s.x - mx);
    vy += (s.y - my) * (s.y - my);
    cxy += (s.x - mx) * (s.y - my);
  }
  const double n = static_cast<double>(iq.size());
  EXPECT_NEAR(mx, 0.0, 0.01);
  EXPECT_NEAR(my, 0.0, 0.01);
  EXPECT_NEAR(vx / n, 2.5, 0.02);
  EXPECT_NEAR(vy / n, 2.5, 0.02);
  EXPECT_NEAR(cxy / n, 0.0, 0.02);
}

TEST(Sampler, SupportBoundHoldsAndIldIsSymmetric) {
  const auto p = StimulusParams::from_snr_db(0.0, kPi / 2);
  const auto smp = sample_interaural(p, 1'000'000, 8);
  std::size_t violations = 0;
  double m1 = 0.0;
  for (const auto& s : smp) {
    if (s.power_p > support_p_hat(p, s.ipd_phi) + 1e-9) ++violations;
    EXPECT_GE(s.power_p, 0.0);
    EXPECT_LE(std::abs(s.ipd_phi), kPi);
    m1 += s.ild_db;
  }
  EXPECT_EQ(violations, 0u);
  EXPECT_NEAR(m1 / smp.size(), 0.0, 0.05);
}

TEST(Sampler, MarginalsMatchModel) {
  const auto p = StimulusParams::from_snr_db(-10.0, kPi);
  const auto smp = sample_interaural(p, 1'000'000, 21);
  std::vector<double> ipd, ild, pw;
  for (const auto& s : smp) {
    ipd.push_back(s.ipd_phi);
    ild.push_back(s.ild_db);
    pw.push_back(s.power_p);
  }
  EXPECT_LT(ks_statistic(ipd, ipd_model_cdf(p)), 0.005);
  EXPECT_LT(ks_statistic(ild, ild_model_cdf(p)), 0.005);
  EXPECT_LT(ks_statistic(pw, pow_model_cdf(p)), 0.01);
}

TEST(Random, UniformRangeAndDeterminism) {
  SubstreamRng a(1, 2), b(1, 2), c(1, 3);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_EQ(u, b.uniform());
    differs = differs || u != c.uniform();
    const double v = a.uniform_open_zero();
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0);
    b.uniform_open_zero();
    c.uniform_open_zero();
  }
  EXPECT_TRUE(differs);
}

TEST(Histogram, KsOfUniformSamples) {
  SubstreamRng rng(4, 0);
  std::vector<double> u(1'000'000);
  for (double& x : u) x = rng.uniform();
  const double d = ks_statistic(u, [](double x) { return std::clamp(x, 0.0, 1.0); });
  EXPECT_LT(d, 0.002);
}

TEST(Histogram, KsDetectsShift) {
  std::vector<double> v;
  for (int i = 0; i < 1000; ++i) v.push_back(0.1 + 0.9 * i / 1000.0);
  EXPECT_NEAR(ks_statistic(v, [](double x) { return std::clamp(x, 0.0, 1.0); }), 0.1, 2e-3);
  EXPECT_THROW(ks_statistic(std::vector<double>{}, [](double x) { return x; }), std::invalid_argument);
}

TEST(Histogram, TvOfIdenticalHistogramsIsZero) {
  Histogram2D a(0, 1, 10, -1, 1, 10), b(0, 1, 10, -1, 1, 10);
  SubstreamRng rng(5, 0);
  for (int i = 0; i < 5000; ++i) {
    const double x = 1.2 * rng.uniform(), y = -1 + 2 * rng.uniform();
    a.add(x, y);
    b.add(x, y);
  }
  EXPECT_EQ(tv_distance(a, a), 0.0);
  EXPECT_EQ(tv_distance(a, b), 0.0);
  EXPECT_GT(a.total(), a.in_range());
}

TEST(Histogram, TvAgainstExactCellMasses) {
  Histogram2D h(0, 1, 4, 0, 1, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) h.add((i + 0.5) / 4, (j + 0.5) / 4);
  EXPECT_NEAR(tv_distance(h, [](double x0, double x1, double y0, double y1) { return (x1 - x0) * (y1 - y0); }), 0.0,
              1e-15);
  // All model mass in one cell.
  EXPECT_NEAR(tv_distance(h, [](double x0, double, double y0, double) { return x0 == 0 && y0 == 0 ? 1.0 : 0.0; }),
              15.0 / 16.0, 1e-15);
}

TEST(Histogram, OneDimensionalDensity) {
  Histogram1D h(-1.0, 1.0, 4);
  for (double x : {-0.9, -0.6, 0.1, 0.2, 0.9, 1.0, 1.5}) h.add(x);
  EXPECT_EQ(h.total(), 7u);
  EXPECT_EQ(h.in_range(), 6u);
  EXPECT_EQ(h.count(3), 2u);
  const auto d = h.density();
  double s = 0;
  for (double v : d) s += v * h.width();
  EXPECT_NEAR(s, 1.0, 1e-15);
  EXPECT_THROW(Histogram1D(1.0, 1.0, 3), std::invalid_argument);
}

TEST(ModelCdf, MonotoneAndNormalized) {
  const auto p = StimulusParams::from_snr_db(0.0, kPi / 2);
  const auto c = ipd_model_cdf(p, 512);
  EXPECT_EQ(c(-kPi), 0.0);
  EXPECT_NEAR(c(kPi), 1.0, 1e-8);
  for (std::size_t i = 1; i < c.values().size(); ++i) EXPECT_GE(c.values()[i], c.values()[i - 1]);
  EXPECT_NEAR(c(c.quantile(0.3)), 0.3, 1e-9);
  const auto l = ild_model_cdf(p, 80.0, 512);
  EXPECT_NEAR(l(0.0), 0.5, 1e-8);
}

TEST(Waveform, LengthAndPureTone) {
  const StimulusParams p(1.0, kPi / 2, 1.0);
  const auto w = synthesize_waveform(p, 48000.0, 500.0, 500.0, 10.0, 1, false);
  EXPECT_EQ(w.left.size(), 480000u);
  EXPECT_EQ(w.right.size(), 480000u);
  const auto short_w = synthesize_waveform(p, 48000.0, 500.0, 500.0, 0.5, 1, false);
  const auto t = extract_cues(short_w);
  EXPECT_EQ(t.size(), 24000u - 2 * 1200u);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(t.ipd_rad[i], kPi / 2, 1e-9);
    EXPECT_NEAR(t.ild_db[i], 0.0, 1e-9);
    EXPECT_NEAR(t.power_p[i], 1.0, 1e-9);
  }
}

TEST(Waveform, AnalyticSignalOfCosine) {
  std::vector<double> x(4800);
  const double w = kTwoPi * 300.0 / 48000.0;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::cos(w * i);
  const auto z = detail::analytic_signal(x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_NEAR(std::abs(z[i]), 1.0, 1e-9);
    EXPECT_NEAR(z[i].real(), x[i], 1e-9);
    EXPECT_NEAR(std::remainder(std::arg(z[i]) - w * i, kTwoPi), 0.0, 1e-9);
  }
}

TEST(Waveform, NoiseVarianceAndDiotic) {
  const StimulusParams p(1e-6, kPi, 2.0);
  const auto w = synthesize_waveform(p, 16000.0, 1000.0, 400.0, 5.0, 3);
  double s2 = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < w.left.size(); ++i) {
    s2 += w.left[i] * w.left[i];
    diff = std::max(diff, std::abs(w.left[i] - w.right[i]));
  }
  // Identical noise in both ears; only the 1e-6 tone differs.
  EXPECT_LE(diff, 2.1e-6);
  EXPECT_NEAR(s2 / w.left.size(), 2.0, 1e-3);
  // Same seed, same waveform.
  const auto w2 = synthesize_waveform(p, 16000.0, 1000.0, 400.0, 5.0, 3);
  EXPECT_EQ(w.left, w2.left);
}

TEST(Waveform, Errors) {
  const StimulusParams p(1.0, kPi, 1.0);
  EXPECT_THROW(synthesize_waveform(p, 1000.0, 400.0, 300.0, 1.0, 1), WaveformError);
  EXPECT_THROW(synthesize_waveform(p, 48000.0, 100.0, 300.0, 1.0, 1), WaveformError);
  EXPECT_THROW(synthesize_waveform(p, 48000.0, 500.0, 500.0, 0.0, 1), WaveformError);
  WaveformStimulus z{48000.0, 500.0, 500.0, 0.01, std::vector<double>(480, 0.0), std::vector<double>(480, 1.0), p};
  EXPECT_THROW(extract_cues(z), WaveformError);
}

TEST(Waveform, CuesMatchIidRoute) {
  const auto p = StimulusParams::from_snr_db(-10.0, kPi);
  const auto tr = extract_cues(synthesize_waveform(p, 48000.0, 500.0, 500.0, 20.0, 9));
  EXPECT_LT(ks_statistic(tr.ipd_rad, ipd_model_cdf(p)), 0.02);
  EXPECT_LT(ks_statistic(tr.ild_db, ild_model_cdf(p)), 0.02);
}

TEST(Waveform, WavHeader) {
  const StimulusParams p(1.0, kPi, 1.0);
  const auto w = synthesize_waveform(p, 8000.0, 1000.0, 200.0, 0.01, 1);
  const auto path = std::filesystem::temp_directory_path() / "interaural_test.wav";
  write_wav(path.string(), w);
  std::ifstream is(path, std::ios::binary);
  std::vector<unsigned char> b((std::istreambuf_iterator<char>(is)), {});
  ASSERT_EQ(b.size(), 44u + 80u * 2u * 4u);
  EXPECT_EQ(std::string(b.begin(), b.begin() + 4), "RIFF");
  EXPECT_EQ(std::string(b.begin() + 8, b.begin() + 16), "WAVEfmt ");
  EXPECT_EQ(b[20], 3);  // float
  EXPECT_EQ(b[22], 2);  // channels
  EXPECT_EQ(b[34], 32);
  float first;
  std::memcpy(&first, &b[44], 4);
  EXPECT_FLOAT_EQ(first, static_cast<float>(w.left[0]));
  std::filesystem::remove(path);
}
