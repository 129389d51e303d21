#pragma once

// Verification checks shared by the `verify` command and the acceptance
// suite. Every check appends one or more records to a report; a record passes
// when its metric is on the right side of its threshold.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "interaural/histogram.hpp"
#include "interaural/marginals.hpp"
#include "interaural/model_cdf.hpp"
#include "interaural/quadrature.hpp"
#include "interaural/random.hpp"
#include "interaural/sampler.hpp"
#include "interaural/stimulus.hpp"
#include "interaural/waveform.hpp"

namespace interaural {

inline constexpr const char* kToolVersion = "0.1.0";

namespace thresholds {
inline constexpr double joint_r_ipd_norm = 1e-6;
inline constexpr double joint_pow_ipd_norm = 1e-4;
inline constexpr double marginal_norm = 1e-6;
inline constexpr double marginal_pow_norm = 1e-4;
inline constexpr double route_agreement = 1e-6;
inline constexpr double exact_identity = 1e-12;
inline constexpr double support_corner = 1e-15;
inline constexpr double support_boundary_g = 1e-10;
inline constexpr double ks_cue = 0.005;
inline constexpr double ks_pow = 0.01;
inline constexpr double tv_joint = 0.01;
inline constexpr double support_slack = 1e-9;
inline constexpr double ild_skew = 0.01;
inline constexpr double delta_mass = 0.99;
inline constexpr double delta_halfwidth = 0.05;
inline constexpr double delta_mean_rad = 0.01;
inline constexpr double ild_mean_db = 0.01;
inline constexpr double ks_waveform = 0.02;
inline constexpr std::size_t tv_min_samples = 10'000'000;
}  // namespace thresholds

struct CheckRecord {
  std::string name;
  std::optional<double> snr_db;
  std::optional<double> psi;
  std::string metric;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::string tool_version = kToolVersion;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> checks;
  std::vector<std::string> notes;

  bool passed() const {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
  }

  /// Record with pass = (value <= threshold); NaN fails.
  CheckRecord& at_most(std::string name, const StimulusParams* p, std::string metric, double value,
                       double threshold, bool valid = true) {
    return add(std::move(name), p, std::move(metric), value, threshold, valid && value <= threshold);
  }

  /// Record with pass = (value >= threshold); NaN fails.
  CheckRecord& at_least(std::string name, const StimulusParams* p, std::string metric, double value,
                        double threshold, bool valid = true) {
    return add(std::move(name), p, std::move(metric), value, threshold, valid && value >= threshold);
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["tool_version"] = tool_version;
    j["seed"] = seed;
    j["pass"] = passed();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
      nlohmann::ordered_json r;
      r["name"] = c.name;
      r["snr_db"] = c.snr_db ? nlohmann::ordered_json(*c.snr_db) : nlohmann::ordered_json();
      r["psi"] = c.psi ? nlohmann::ordered_json(*c.psi) : nlohmann::ordered_json();
      r["metric"] = c.metric;
      r["value"] = std::isfinite(c.value) ? nlohmann::ordered_json(c.value) : nlohmann::ordered_json();
      r["threshold"] = c.threshold;
      r["pass"] = c.pass;
      arr.push_back(std::move(r));
    }
    j["checks"] = std::move(arr);
    j["notes"] = notes;
    return j;
  }

 private:
  CheckRecord& add(std::string name, const StimulusParams* p, std::string metric, double value,
                   double threshold, bool pass) {
    CheckRecord r;
    r.name = std::move(name);
    if (p) {
      r.snr_db = p->snr_db();
      r.psi = p->tone_ipd();
    }
    r.metric = std::move(metric);
    r.value = value;
    r.threshold = threshold;
    r.pass = pass && !std::isnan(value);
    checks.push_back(std::move(r));
    return checks.back();
  }
};

// ---------------------------------------------------------------------------
// Quadrature-based checks

inline void check_joint_normalization(VerificationReport& rep, const StimulusParams& p) {
  const auto nr = normalization_r_ipd(p);
  rep.at_most("normalization_r_ipd", &p, "abs(integral - 1)", std::abs(nr.value - 1.0),
              thresholds::joint_r_ipd_norm, nr.converged);
  const auto np = normalization_pow_ipd(p);
  rep.at_most("normalization_pow_ipd", &p, "abs(integral - 1)", std::abs(np.value - 1.0),
              thresholds::joint_pow_ipd_norm, np.converged);
}

inline void check_marginal_normalization(VerificationReport& rep, const StimulusParams& p) {
  const auto ni = normalization_iar(p);
  rep.at_most("normalization_iar", &p, "abs(integral - 1)", std::abs(ni.value - 1.0),
              thresholds::marginal_norm, ni.converged);
  const auto nl = normalization_ild(p);
  rep.at_most("normalization_ild", &p, "abs(integral - 1)", std::abs(nl.value - 1.0),
              thresholds::marginal_norm, nl.converged);
  const auto np = normalization_pow(p);
  rep.at_most("normalization_pow", &p, "abs(integral - 1)", std::abs(np.value - 1.0),
              thresholds::marginal_pow_norm, np.converged);
}

inline void check_route_agreement(VerificationReport& rep, const StimulusParams& p,
                                  std::size_t points = 181) {
  double worst = 0.0;
  bool ok = true;
  for (double d : linspace(-kPi, kPi, points)) {
    const auto a = marginal_ipd_integral(p, d, IpdRoute::via_r);
    const auto b = marginal_ipd_integral(p, d, IpdRoute::via_p);
    ok = ok && a.converged && b.converged;
    worst = std::max(worst, std::abs(a.value - b.value));
  }
  rep.at_most("ipd_route_agreement", &p, "max abs(via_r - via_p)", worst,
              thresholds::route_agreement, ok);
}

/// SNR equivalence, reflection, reciprocity and P' power scaling at
/// `n` random points (random parameters too).
inline void check_exact_identities(VerificationReport& rep, std::size_t n, std::uint64_t seed) {
  SubstreamRng rng(seed, 0x1d);
  // Densities that underflow into the subnormal range carry no relative precision.
  auto rel = [](double a, double b) {
    const double m = std::max(std::abs(a), std::abs(b));
    return m < 1e-290 ? 0.0 : std::abs(a - b) / m;
  };
  double snr_eq = 0.0, refl = 0.0, recip = 0.0, pscale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double snr_db = -20.0 + 40.0 * rng.uniform();
    double psi = -kPi + kTwoPi * rng.uniform_open_zero();
    if (std::abs(psi) < 1e-3) psi = 1e-3;
    const double var = std::pow(10.0, -1.0 + 2.0 * rng.uniform());
    const double k = std::pow(10.0, -3.0 + 6.0 * rng.uniform());
    const double r = std::pow(10.0, -2.0 + 4.0 * rng.uniform());
    const double d = -kPi + kTwoPi * rng.uniform_open_zero();
    const auto base = StimulusParams::from_snr_db(snr_db, psi, var);
    const double c = base.tone_amplitude();

    const StimulusParams scaled(std::sqrt(k) * c, psi, k * var);
    snr_eq = std::max(snr_eq, rel(joint_r_ipd_pdf(base, r, d), joint_r_ipd_pdf(scaled, r, d)));

    const StimulusParams mirror(c, -psi, var);
    refl = std::max(refl, rel(joint_r_ipd_pdf(base, r, d), joint_r_ipd_pdf(mirror, r, -d)));

    recip = std::max(recip, rel(joint_r_ipd_pdf(base, 1.0 / r, d), r * r * joint_r_ipd_pdf(base, r, d)));

    // P' inside the support: a random fraction of p_hat, capped for dphi near 0.
    const double ph = std::min(support_p_hat(base, d), 50.0 * std::max(var, c * c));
    const double pp = ph * rng.uniform_open_zero() * (1.0 - 1e-6);
    // Power-of-four factor so that the scaled inputs carry no rounding of
    // their own; near the support boundary f is too ill-conditioned for that.
    const double k4 = std::ldexp(1.0, 2 * static_cast<int>(std::floor(11.0 * rng.uniform())) - 10);
    const StimulusParams scaled4(std::sqrt(k4) * c, psi, k4 * var);
    const auto f = joint_pow_ipd_pdf(base, pp, d);
    const auto g = joint_pow_ipd_pdf(scaled4, k4 * pp, d);
    if (f && g) pscale = std::max(pscale, rel(*f, k4 * *g));
  }
  rep.at_most("snr_equivalence", nullptr, "max relative deviation", snr_eq, thresholds::exact_identity);
  rep.at_most("reflection_symmetry", nullptr, "max relative deviation", refl, thresholds::exact_identity);
  rep.at_most("reciprocity", nullptr, "max relative deviation", recip, thresholds::exact_identity);
  rep.at_most("pow_power_scaling", nullptr, "max relative deviation", pscale, thresholds::exact_identity);
}

/// Support corners p_hat(+-psi) = C^2, p_hat(+-pi) = C^2 sin^2(psi/2), and
/// g = 0 on the boundary.
inline void check_support(VerificationReport& rep, const StimulusParams& p) {
  const double c2 = p.tone_power();
  const double a2 = p.half_chord_sq();
  const double psi = p.tone_ipd();
  const double at_psi = std::max(std::abs(support_p_hat(p, psi) - c2),
                                 std::abs(support_p_hat(p, -psi) - c2)) / c2;
  rep.at_most("support_p_hat_at_psi", &p, "relative deviation from C^2", at_psi, thresholds::support_corner);
  const double at_pi = std::max(std::abs(support_p_hat(p, kPi) - a2),
                                std::abs(support_p_hat(p, -kPi) - a2)) / a2;
  rep.at_most("support_p_hat_at_pi", &p, "relative deviation from C^2 sin^2(psi/2)", at_pi,
              thresholds::support_corner);

  double worst = 0.0;
  std::size_t inside_bad = 0;
  for (double d : linspace(-kPi, kPi, 721)) {
    if (d == 0.0) continue;
    const double ph = support_p_hat(p, d);
    const double ch = std::cos(0.5 * d);
    const double scale = 4.0 * a2 * (a2 + ph * ch * ch);
    worst = std::max(worst, std::abs(pow_support_g(p, ph, d)) / scale);
    for (double frac : {1e-6, 0.25, 0.5, 0.999999}) {
      if (!(pow_support_g(p, frac * ph, d) > 0.0)) ++inside_bad;
    }
  }
  rep.at_most("support_boundary_g_zero", &p, "max |g| / scale on the boundary", worst,
              thresholds::support_boundary_g);
  rep.at_most("support_interior_g_positive", &p, "interior points with g <= 0",
              static_cast<double>(inside_bad), 0.0);
}

/// The P'/C^2 marginal (dB axis, 401 points on [-40, 20] dB) has a local
/// maximum within one grid step of sin^2(psi/2).
inline void check_pow_peak(VerificationReport& rep, const StimulusParams& p) {
  const auto curve = compute_marginal_curve(MarginalKind::pow, p, default_axis(MarginalKind::pow));
  const double target = 10.0 * std::log10(p.half_sin() * p.half_sin());
  const double step = curve.axis[1] - curve.axis[0];
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < curve.axis.size(); ++i) {
    const bool local_max = curve.density[i] >= curve.density[i - 1] && curve.density[i] >= curve.density[i + 1];
    if (local_max) best = std::min(best, std::abs(curve.axis[i] - target));
  }
  rep.at_most("pow_marginal_peak", &p, "dB distance of nearest local max to sin^2(psi/2), in grid steps",
              best / step, 1.0);
}

/// delta limits at +-40 dB: IPD mass near psi / near 0, circular means, ILD means.
inline void check_delta_limits(VerificationReport& rep, double psi) {
  const auto hi = StimulusParams::from_snr_db(40.0, psi);
  const auto lo = StimulusParams::from_snr_db(-40.0, psi);
  const double hw = thresholds::delta_halfwidth;
  rep.at_least("delta_limit_mass_near_psi", &hi, "IPD mass within +-0.05 rad of psi",
               ipd_mass_within(hi, psi, hw), thresholds::delta_mass);
  rep.at_least("delta_limit_mass_near_zero", &lo, "IPD mass within +-0.05 rad of 0",
               ipd_mass_within(lo, 0.0, hw), thresholds::delta_mass);
  rep.at_most("delta_limit_mean_psi", &hi, "abs(circular mean - psi)",
              std::abs(wrap_angle(circular_moments(hi).circular_mean - psi)), thresholds::delta_mean_rad);
  rep.at_most("delta_limit_mean_zero", &lo, "abs(circular mean)",
              std::abs(circular_moments(lo).circular_mean), thresholds::delta_mean_rad);
  rep.at_most("ild_mean_high_snr", &hi, "abs(mean ILD) dB", std::abs(ild_mean(hi)), thresholds::ild_mean_db);
  rep.at_most("ild_mean_low_snr", &lo, "abs(mean ILD) dB", std::abs(ild_mean(lo)), thresholds::ild_mean_db);
}

/// Closed-form integrals: true error must be within the reported estimate and
/// within the stated accuracy.
inline void check_quadrature_selftest(VerificationReport& rep) {
  std::size_t under_reports = 0;
  double worst_ratio = 0.0;
  auto record = [&](const QuadratureResult& r, double truth, double accuracy, const std::string& name) {
    const double err = std::abs(r.value - truth);
    if (err > r.abs_error_estimate || !r.converged) ++under_reports;
    if (r.abs_error_estimate > 0.0) worst_ratio = std::max(worst_ratio, err / r.abs_error_estimate);
    rep.at_most("quadrature_" + name, nullptr, "abs error", err, accuracy, r.converged);
  };
  record(integrate_finite([](double x) { return x * x; }, 0.0, 1.0), 1.0 / 3.0, 1e-12, "x2");
  record(integrate_finite([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0), 2.0, 1e-8, "inv_sqrt");
  record(integrate_semi_infinite([](double x) { return std::exp(-x); }, 0.0), 1.0, 1e-10, "exp");
  {
    auto g = [](double x) { return std::exp(-x * x); };
    QuadratureResult r = integrate_semi_infinite(g, 0.0);
    accumulate(r, integrate_semi_infinite_below(g, 0.0));
    record(r, std::sqrt(kPi), 1e-10, "gauss");
  }
  double poly_worst = 0.0;
  bool poly_ok = true;
  for (int k = 0; k <= 40; ++k) {
    const auto r = integrate_finite([k](double x) { return (k + 1) * std::pow(x, k); }, 0.0, 1.0);
    const auto s = integrate_finite([k](double x) { return std::pow(x, k); }, -1.0, 1.0);
    const double s_true = k % 2 == 0 ? 2.0 / (k + 1) : 0.0;
    for (auto [res, truth] : {std::pair{r, 1.0}, std::pair{s, s_true}}) {
      const double err = std::abs(res.value - truth);
      if (err > res.abs_error_estimate || !res.converged) ++under_reports;
      poly_ok = poly_ok && res.converged;
      poly_worst = std::max(poly_worst, err);
    }
  }
  rep.at_most("quadrature_polynomials", nullptr, "max abs error, degree 0..40", poly_worst, 1e-12, poly_ok);
  rep.at_most("quadrature_error_bounds", nullptr, "cases where true error > estimate",
              static_cast<double>(under_reports), 0.0);
}

// ---------------------------------------------------------------------------
// Sampling oracles

struct OracleOptions {
  std::size_t samples = thresholds::tv_min_samples;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  /// TV over 100 x 100 cells and the ILD skewness need about 1e7 samples to
  /// get the sampling noise well below their thresholds; below that they are
  /// skipped.
  std::size_t tv_min_samples = thresholds::tv_min_samples;
};

inline void check_sampler_oracle(VerificationReport& rep, const StimulusParams& p, const OracleOptions& opt) {
  const auto smp = sample_interaural(p, opt.samples, opt.seed, opt.workers);
  std::vector<double> col(smp.size());
  auto ks = [&](auto get, const TabulatedCdf& cdf, const char* name, double thr) {
    for (std::size_t i = 0; i < smp.size(); ++i) col[i] = get(smp[i]);
    rep.at_most(name, &p, "KS statistic", ks_statistic(col, cdf), thr);
  };
  const auto c_ipd = ipd_model_cdf(p);
  ks([](const InterauralSample& s) { return s.ipd_phi; }, c_ipd, "oracle_ks_ipd", thresholds::ks_cue);
  const auto c_iar = iar_model_cdf(p);
  ks([](const InterauralSample& s) { return s.iar_r; }, c_iar, "oracle_ks_iar", thresholds::ks_cue);
  const auto c_ild = ild_model_cdf(p);
  ks([](const InterauralSample& s) { return s.ild_db; }, c_ild, "oracle_ks_ild", thresholds::ks_cue);
  const auto c_pow = pow_model_cdf(p);
  ks([](const InterauralSample& s) { return s.power_p; }, c_pow, "oracle_ks_pow", thresholds::ks_pow);

  std::size_t violations = 0;
  double m1 = 0.0;
  for (const auto& s : smp) {
    if (s.power_p > support_p_hat(p, s.ipd_phi) + thresholds::support_slack) ++violations;
    m1 += s.ild_db;
  }
  const double n = static_cast<double>(smp.size());
  m1 /= n;
  double m2 = 0.0, m3 = 0.0;
  for (const auto& s : smp) {
    const double d = s.ild_db - m1;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  rep.at_most("oracle_support_violations", &p, "samples with p' > p_hat(dphi) + 1e-9",
              static_cast<double>(violations), 0.0);
  if (opt.samples < opt.tv_min_samples) {
    rep.notes.push_back("skewness and TV checks skipped: fewer than " + std::to_string(opt.tv_min_samples) +
                        " samples");
    return;
  }
  rep.at_most("oracle_ild_skewness", &p, "abs(sample skewness of ILD)",
              std::abs(m3 / std::pow(m2, 1.5)), thresholds::ild_skew);
  const double rmax = c_iar.quantile(0.999);
  const double pmax = c_pow.quantile(0.999);
  Histogram2D hr(0.0, rmax, 100, -kPi, kPi, 100);
  Histogram2D hp(0.0, pmax, 100, -kPi, kPi, 100);
  for (const auto& s : smp) {
    hr.add(s.iar_r, s.ipd_phi);
    hp.add(s.power_p, s.ipd_phi);
  }
  rep.at_most("oracle_tv_r_ipd", &p, "TV distance, 100x100 cells",
              tv_distance(hr, [&](double a, double b, double c, double d) { return r_ipd_cell_mass(p, a, b, c, d); }),
              thresholds::tv_joint);
  rep.at_most("oracle_tv_pow_ipd", &p, "TV distance, 100x100 cells",
              tv_distance(hp, [&](double a, double b, double c, double d) { return pow_ipd_cell_mass(p, a, b, c, d); }),
              thresholds::tv_joint);
}

struct WaveformOptions {
  double sample_rate_hz = 48000.0;
  double center_freq_hz = 500.0;
  double bandwidth_hz = 500.0;
  double duration_s = 60.0;
  std::uint64_t seed = 1;
};

/// Cues from a synthesized waveform against the analytic marginals and
/// against i.i.d. samples of the same size.
inline void check_waveform_oracle(VerificationReport& rep, const StimulusParams& p, const WaveformOptions& opt) {
  const auto stim = synthesize_waveform(p, opt.sample_rate_hz, opt.center_freq_hz, opt.bandwidth_hz,
                                        opt.duration_s, opt.seed);
  const auto tr = extract_cues(stim);
  rep.at_most("waveform_ks_ipd", &p, "KS statistic", ks_statistic(tr.ipd_rad, ipd_model_cdf(p)),
              thresholds::ks_waveform);
  rep.at_most("waveform_ks_ild", &p, "KS statistic", ks_statistic(tr.ild_db, ild_model_cdf(p)),
              thresholds::ks_waveform);
  rep.at_most("waveform_ks_pow", &p, "KS statistic", ks_statistic(tr.power_p, pow_model_cdf(p)),
              thresholds::ks_waveform);
  const auto iid = sample_interaural(p, tr.size(), opt.seed);
  std::vector<double> col(iid.size());
  for (std::size_t i = 0; i < iid.size(); ++i) col[i] = iid[i].ipd_phi;
  rep.at_most("waveform_vs_iid_ks_ipd", &p, "two-sample KS statistic",
              ks_statistic_two_sample(col, tr.ipd_rad), thresholds::ks_waveform);
  for (std::size_t i = 0; i < iid.size(); ++i) col[i] = iid[i].ild_db;
  rep.at_most("waveform_vs_iid_ks_ild", &p, "two-sample KS statistic",
              ks_statistic_two_sample(col, tr.ild_db), thresholds::ks_waveform);
}

}  // namespace interaural
