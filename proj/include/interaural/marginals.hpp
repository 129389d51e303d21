#pragma once

// Marginal densities of the interaural cues, obtained by integrating the
// closed-form joint densities over the other variable, plus circular
// summary statistics of the IPD distribution.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "interaural/quadrature.hpp"
#include "interaural/stimulus.hpp"

namespace interaural {

enum class IpdRoute { via_r, via_p };

enum class MarginalKind { ipd, iar, ild, pow };

inline std::string_view to_string(MarginalKind k) {
  switch (k) {
    case MarginalKind::ipd: return "ipd";
    case MarginalKind::iar: return "iar";
    case MarginalKind::ild: return "ild";
    case MarginalKind::pow: return "pow";
  }
  return "?";
}

namespace detail {

// Relative offsets used to place breakpoints around narrow features. The
// cue distributions sharpen like 1/sqrt(SNR) at high SNR and like sqrt(SNR)
// at low SNR; this ladder resolves both down to about +-50 dB.
inline constexpr std::array<double, 7> kLadder = {0.5, 0.2, 0.05, 0.0125, 0.003, 0.0008, 0.0002};

// Sorts and drops points closer than 1e-12 (relative) to their predecessor,
// so that no piece is so thin that its quadrature nodes land on a breakpoint.
inline void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  auto near = [](double a, double b) {
    return std::abs(b - a) <= 1e-12 * std::max({std::abs(a), std::abs(b), 1e-300});
  };
  v.erase(std::unique(v.begin(), v.end(), near), v.end());
}

inline double value_or_throw(const QuadratureResult& r, const char* what) {
  if (!r.converged) {
    throw QuadratureError(std::string(what) + ": adaptive quadrature did not converge");
  }
  return r.value;
}

}  // namespace detail

/// Breakpoints on [-pi, pi] clustered around dphi = 0 and dphi = psi.
inline std::vector<double> ipd_breakpoints(const StimulusParams& params) {
  std::vector<double> pts{-kPi, kPi, 0.0};
  const double psi = params.tone_ipd();
  pts.push_back(psi);
  for (double d : detail::kLadder) {
    for (double center : {0.0, psi}) {
      for (double x : {center - d, center + d}) {
        if (x > -kPi && x < kPi) pts.push_back(x);
      }
    }
  }
  detail::sort_unique(pts);
  return pts;
}

/// Breakpoints on [0, 2] around r = 1; the tail beyond 2 is integrated separately.
inline std::vector<double> iar_breakpoints() {
  std::vector<double> pts{0.0, 1.0, 2.0};
  for (double d : detail::kLadder) {
    pts.push_back(1.0 - d);
    pts.push_back(1.0 + d);
  }
  detail::sort_unique(pts);
  return pts;
}

/// Breakpoints on [0, upper] for P' integrals: tone power, noise power scales
/// and the support corner a^2.
inline std::vector<double> pow_breakpoints(const StimulusParams& params, double upper) {
  const double c2 = params.tone_power();
  const double var = params.noise_variance();
  std::vector<double> cand{c2, params.half_chord_sq()};
  for (double d : detail::kLadder) {
    cand.push_back(c2 * (1.0 - d));
    cand.push_back(c2 * (1.0 + d));
  }
  for (double k = 1.0 / 16.0; k <= 64.0; k *= 2.0) cand.push_back(var * k);
  std::vector<double> pts{0.0};
  for (double x : cand) {
    if (x > 0.0 && x < upper) pts.push_back(x);
  }
  if (std::isfinite(upper)) pts.push_back(upper);
  detail::sort_unique(pts);
  return pts;
}

/// Integral of f_{P',dPhi}(., dphi) over [p_lo, p_hi] intersected with the
/// support. The part above max(p_lo, upper/2) is integrated through
/// p = upper - t^2, which cancels the 1/sqrt(upper - p) singularity analytically.
inline QuadratureResult pow_ipd_slice_integral(const StimulusParams& params, double dphi,
                                               double p_lo, double p_hi,
                                               const QuadratureConfig& cfg = {}) {
  detail::check_ipd(dphi);
  const double upper = support_p_hat(params, dphi);
  p_lo = std::max(p_lo, 0.0);
  auto f = [&](double p) { return joint_pow_ipd_pdf_or_zero(params, p, dphi); };
  auto direct = [&](double lo, double hi) {
    std::vector<double> pts{lo, hi};
    for (double x : pow_breakpoints(params, upper)) {
      if (x > lo && x < hi) pts.push_back(x);
    }
    detail::sort_unique(pts);
    return integrate_pieces(f, pts, cfg);
  };
  if (!(p_lo < p_hi) || !(p_lo < upper)) return QuadratureResult{0.0, 0.0, 0, true, QuadratureStatus::ok};
  if (!std::isfinite(upper)) {
    // dphi = 0: unbounded support in P'.
    if (std::isfinite(p_hi)) return direct(p_lo, p_hi);
    const double tail_start = std::max({p_lo, 2.0 * params.tone_power(), 64.0 * params.noise_variance()});
    QuadratureResult total = direct(p_lo, tail_start);
    accumulate(total, integrate_semi_infinite(f, tail_start, cfg));
    return total;
  }
  const double mid = std::max(p_lo, 0.5 * upper);
  if (p_hi <= mid) return direct(p_lo, p_hi);
  QuadratureResult total = direct(p_lo, mid);
  // Also used when p_hi sits just below the boundary, where the integrand is
  // nearly singular.
  const double top = std::min(p_hi, upper);
  std::vector<double> t_pts{std::sqrt(upper - top), std::sqrt(upper - mid)};
  for (double x : pow_breakpoints(params, upper)) {
    if (x > mid && x < top) t_pts.push_back(std::sqrt(upper - x));
  }
  detail::sort_unique(t_pts);
  const double sh = std::abs(std::sin(0.5 * dphi));
  auto upper_part = [&](double t) {
    const double p = upper - t * t;
    if (!(p > 0.0)) return 0.0;
    return 2.0 * std::exp(detail::log_pow_ipd_regular_part(params, p, dphi)) / sh;
  };
  accumulate(total, integrate_pieces(upper_part, t_pts, cfg));
  return total;
}

/// IPD marginal at dphi as a raw quadrature result.
inline QuadratureResult marginal_ipd_integral(const StimulusParams& params, double dphi,
                                              IpdRoute route = IpdRoute::via_r,
                                              const QuadratureConfig& cfg = {}) {
  detail::check_ipd(dphi);
  if (route == IpdRoute::via_r) {
    auto f = [&](double r) { return joint_r_ipd_pdf(params, r, dphi); };
    const auto pts = iar_breakpoints();
    QuadratureResult total = integrate_pieces(f, pts, cfg);
    accumulate(total, integrate_semi_infinite(f, pts.back(), cfg));
    return total;
  }
  return pow_ipd_slice_integral(params, dphi, 0.0, std::numeric_limits<double>::infinity(), cfg);
}

/// f_dPhi(dphi). The r route integrates over [0, inf); the P' route over
/// [0, support_p_hat(dphi)]. Both give the same value.
inline double marginal_ipd(const StimulusParams& params, double dphi,
                           IpdRoute route = IpdRoute::via_r, const QuadratureConfig& cfg = {}) {
  return detail::value_or_throw(marginal_ipd_integral(params, dphi, route, cfg), "marginal_ipd");
}

inline QuadratureResult marginal_iar_integral(const StimulusParams& params, double r,
                                              const QuadratureConfig& cfg = {}) {
  if (!(r >= 0.0)) throw ParameterError("IAR must be non-negative");
  if (r == 0.0) return QuadratureResult{0.0, 0.0, 0, true, QuadratureStatus::ok};
  auto f = [&](double dphi) { return joint_r_ipd_pdf(params, r, dphi); };
  return integrate_pieces(f, ipd_breakpoints(params), cfg);
}

/// f_R(r) = integral of f_{R,dPhi}(r, .) over [-pi, pi].
inline double marginal_iar(const StimulusParams& params, double r, const QuadratureConfig& cfg = {}) {
  return detail::value_or_throw(marginal_iar_integral(params, r, cfg), "marginal_iar");
}

/// f_dL(dl) = r ln(10)/20 f_R(r) with r = 10^(dl/20).
inline double marginal_ild(const StimulusParams& params, double dl, const QuadratureConfig& cfg = {}) {
  const double r = iar_from_ild(dl);
  if (!(r > 0.0) || !std::isfinite(r)) return 0.0;
  return r * std::log(10.0) / 20.0 * marginal_iar(params, r, cfg);
}

inline QuadratureResult marginal_pow_integral(const StimulusParams& params, double p,
                                              const QuadratureConfig& cfg = {}) {
  if (!(p > 0.0)) throw ParameterError("P' must be positive");
  const double a2 = params.half_chord_sq();
  auto f = [&](double dphi) { return joint_pow_ipd_pdf_or_zero(params, p, dphi); };
  const auto ipd_pts = ipd_breakpoints(params);
  if (p <= a2) {
    // Full circle; the density peaks towards +-pi as p approaches a^2.
    std::vector<double> pts = ipd_pts;
    for (double d : detail::kLadder) {
      pts.push_back(-kPi + d);
      pts.push_back(kPi - d);
    }
    detail::sort_unique(pts);
    return integrate_pieces(f, pts, cfg);
  }
  // Support is [-w, w] with inverse-square-root singularities at both ends.
  // The outer quarters use |dphi| = w - u^2, and the boundary gap
  // a^2 - p sin^2(dphi/2) = p sin(u^2/2) sin(w - u^2/2) is formed without
  // cancellation.
  const double w = support_phi_hat(params, p);
  const double half = 0.5 * w;
  std::vector<double> mid_pts{-half, half};
  std::vector<double> right_u{0.0, std::sqrt(w - half)};
  std::vector<double> left_u{0.0, std::sqrt(w - half)};
  for (double x : ipd_pts) {
    if (x > -half && x < half) mid_pts.push_back(x);
    if (x > half && x < w) right_u.push_back(std::sqrt(w - x));
    if (x < -half && x > -w) left_u.push_back(std::sqrt(w + x));
  }
  detail::sort_unique(mid_pts);
  detail::sort_unique(right_u);
  detail::sort_unique(left_u);
  auto edge = [&](double u, double sign) {
    const double u2 = u * u;
    const double dphi = sign * (w - u2);
    const double gap = p * std::sin(0.5 * u2) * std::sin(w - 0.5 * u2);
    const double reg = std::exp(detail::log_pow_ipd_regular_part(params, p, dphi));
    if (u == 0.0) return 2.0 * reg / std::sqrt(0.5 * p * std::sin(w));
    if (!(gap > 0.0)) return 0.0;
    return 2.0 * u * reg / std::sqrt(gap);
  };
  QuadratureResult total = integrate_pieces(f, mid_pts, cfg);
  accumulate(total, integrate_pieces([&](double u) { return edge(u, 1.0); }, right_u, cfg));
  accumulate(total, integrate_pieces([&](double u) { return edge(u, -1.0); }, left_u, cfg));
  return total;
}

/// f_{P'}(p) = integral of f_{P',dPhi}(p, .) over [-dphi_hat(p), dphi_hat(p)].
/// Has an integrable logarithmic peak at p = C^2 sin^2(psi/2).
inline double marginal_pow(const StimulusParams& params, double p, const QuadratureConfig& cfg = {}) {
  return detail::value_or_throw(marginal_pow_integral(params, p, cfg), "marginal_pow");
}

/// Integral of the (r, dphi) joint over its whole domain.
inline QuadratureResult normalization_r_ipd(const StimulusParams& params,
                                            const QuadratureConfig& cfg = {}) {
  auto f = [&](double dphi) { return marginal_ipd(params, dphi, IpdRoute::via_r, cfg); };
  return integrate_pieces(f, ipd_breakpoints(params), cfg);
}

/// Integral of the (P', dphi) joint over its support.
inline QuadratureResult normalization_pow_ipd(const StimulusParams& params,
                                              const QuadratureConfig& cfg = {}) {
  auto f = [&](double dphi) { return marginal_ipd(params, dphi, IpdRoute::via_p, cfg); };
  return integrate_pieces(f, ipd_breakpoints(params), cfg);
}

/// Integral of f_R over [0, inf).
inline QuadratureResult normalization_iar(const StimulusParams& params,
                                          const QuadratureConfig& cfg = {}) {
  auto f = [&](double r) { return marginal_iar(params, r, cfg); };
  const auto pts = iar_breakpoints();
  QuadratureResult total = integrate_pieces(f, pts, cfg);
  accumulate(total, integrate_semi_infinite(f, pts.back(), cfg));
  return total;
}

/// Integral of f_dL over the real line.
inline QuadratureResult normalization_ild(const StimulusParams& params,
                                          const QuadratureConfig& cfg = {}) {
  auto f = [&](double dl) { return marginal_ild(params, dl, cfg); };
  std::vector<double> pts{-6.0, 0.0, 6.0};
  for (double d : detail::kLadder) {
    pts.push_back(-ild_from_iar(1.0 + d));
    pts.push_back(ild_from_iar(1.0 + d));
  }
  detail::sort_unique(pts);
  QuadratureResult total = integrate_pieces(f, pts, cfg);
  accumulate(total, integrate_semi_infinite(f, pts.back(), cfg));
  accumulate(total, integrate_semi_infinite_below(f, pts.front(), cfg));
  return total;
}

/// Integral of f_{P'} over (0, inf).
inline QuadratureResult normalization_pow(const StimulusParams& params,
                                          const QuadratureConfig& cfg = {}) {
  auto f = [&](double p) { return p > 0.0 ? marginal_pow(params, p, cfg) : 0.0; };
  const double upper = 64.0 * std::max(params.noise_variance(), params.tone_power());
  const auto pts = pow_breakpoints(params, upper);
  QuadratureResult total = integrate_pieces(f, pts, cfg);
  accumulate(total, integrate_semi_infinite(f, upper, cfg));
  return total;
}

struct CircularMoments {
  double circular_mean = 0.0;      // arg of the first trigonometric moment
  double resultant_length = 0.0;   // |first trigonometric moment|
  double circular_variance = 0.0;  // 1 - resultant_length
  double linear_std = 0.0;         // RMS of the wrapped deviation from the circular mean
};

/// Circular moments of the IPD marginal.
inline CircularMoments circular_moments(const StimulusParams& params,
                                        const QuadratureConfig& cfg = {}) {
  const auto pts = ipd_breakpoints(params);
  auto density = [&](double d) { return marginal_ipd(params, d, IpdRoute::via_r, cfg); };
  const double c = detail::value_or_throw(
      integrate_pieces([&](double d) { return std::cos(d) * density(d); }, pts, cfg),
      "circular_moments");
  const double s = detail::value_or_throw(
      integrate_pieces([&](double d) { return std::sin(d) * density(d); }, pts, cfg),
      "circular_moments");
  CircularMoments m;
  m.circular_mean = std::atan2(s, c);
  m.resultant_length = std::hypot(c, s);
  m.circular_variance = 1.0 - m.resultant_length;

  std::vector<double> spts = pts;
  spts.push_back(wrap_angle(m.circular_mean + kPi));
  detail::sort_unique(spts);
  const double mu = m.circular_mean;
  const double second = detail::value_or_throw(
      integrate_pieces(
          [&](double d) {
            const double dev = wrap_angle(d - mu);
            return dev * dev * density(d);
          },
          spts, cfg),
      "circular_moments");
  m.linear_std = std::sqrt(std::max(0.0, second));
  return m;
}

/// Probability that the IPD lies within +-half_width of `center` (circular window).
inline double ipd_mass_within(const StimulusParams& params, double center, double half_width,
                              const QuadratureConfig& cfg = {}) {
  if (!(half_width > 0.0)) return 0.0;
  if (half_width >= kPi) return 1.0;
  auto density = [&](double d) { return marginal_ipd(params, d, IpdRoute::via_r, cfg); };
  const double lo = center - half_width;
  const double hi = center + half_width;
  // Split the window at the +-pi seam.
  std::vector<std::pair<double, double>> windows;
  if (lo < -kPi) {
    windows = {{-kPi, hi}, {lo + kTwoPi, kPi}};
  } else if (hi > kPi) {
    windows = {{lo, kPi}, {-kPi, hi - kTwoPi}};
  } else {
    windows = {{lo, hi}};
  }
  double mass = 0.0;
  for (auto [a, b] : windows) {
    std::vector<double> pts{a, b};
    for (double x : ipd_breakpoints(params)) {
      if (x > a && x < b) pts.push_back(x);
    }
    detail::sort_unique(pts);
    mass += detail::value_or_throw(integrate_pieces(density, pts, cfg), "ipd_mass_within");
  }
  return mass;
}

/// Mean ILD in dB, E[20 log10 R].
inline double ild_mean(const StimulusParams& params, const QuadratureConfig& cfg = {}) {
  auto f = [&](double dl) { return dl * marginal_ild(params, dl, cfg); };
  std::vector<double> pts{-6.0, 0.0, 6.0};
  for (double d : detail::kLadder) {
    pts.push_back(-ild_from_iar(1.0 + d));
    pts.push_back(ild_from_iar(1.0 + d));
  }
  detail::sort_unique(pts);
  QuadratureResult total = integrate_pieces(f, pts, cfg);
  accumulate(total, integrate_semi_infinite(f, pts.back(), cfg));
  accumulate(total, integrate_semi_infinite_below(f, pts.front(), cfg));
  return detail::value_or_throw(total, "ild_mean");
}

// ---------------------------------------------------------------------------
// Marginal curves on an axis

enum class PowAxisScale { linear, db };

/// A marginal density sampled on an axis. For `pow` the axis is P'/C^2
/// (linear or in dB) and the density is with respect to that axis variable.
struct MarginalCurve {
  MarginalKind which = MarginalKind::ipd;
  std::vector<double> axis;
  std::vector<double> density;
  StimulusParams params;
  PowAxisScale pow_scale = PowAxisScale::db;
};

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  v.back() = hi;
  return v;
}

/// Default axes: IPD [-pi, pi] (181), ILD [-40, 40] dB (401), IAR [0, 10] (401),
/// P'/C^2 [-40, 20] dB (401).
inline std::vector<double> default_axis(MarginalKind which) {
  switch (which) {
    case MarginalKind::ipd: return linspace(-kPi, kPi, 181);
    case MarginalKind::ild: return linspace(-40.0, 40.0, 401);
    case MarginalKind::iar: return linspace(0.0, 10.0, 401);
    case MarginalKind::pow: return linspace(-40.0, 20.0, 401);
  }
  return {};
}

/// Density of the marginal `which` at a single axis value.
inline double marginal_density_at(MarginalKind which, const StimulusParams& params, double x,
                                  PowAxisScale pow_scale = PowAxisScale::db,
                                  const QuadratureConfig& cfg = {}) {
  switch (which) {
    case MarginalKind::ipd: return marginal_ipd(params, x, IpdRoute::via_r, cfg);
    case MarginalKind::iar: return marginal_iar(params, x, cfg);
    case MarginalKind::ild: return marginal_ild(params, x, cfg);
    case MarginalKind::pow: {
      const double c2 = params.tone_power();
      if (pow_scale == PowAxisScale::linear) {
        if (!(x > 0.0)) return 0.0;
        return c2 * marginal_pow(params, c2 * x, cfg);
      }
      const double u = std::pow(10.0, x / 10.0);
      return c2 * marginal_pow(params, c2 * u, cfg) * u * std::log(10.0) / 10.0;
    }
  }
  return 0.0;
}

inline MarginalCurve compute_marginal_curve(MarginalKind which, const StimulusParams& params,
                                            std::vector<double> axis,
                                            PowAxisScale pow_scale = PowAxisScale::db,
                                            const QuadratureConfig& cfg = {}) {
  MarginalCurve curve{which, std::move(axis), {}, params, pow_scale};
  curve.density.reserve(curve.axis.size());
  for (double x : curve.axis) {
    curve.density.push_back(marginal_density_at(which, params, x, pow_scale, cfg));
  }
  return curve;
}

/// Trapezoid integral of a sampled curve.
inline double trapezoid(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size() && i < y.size(); ++i) {
    s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  }
  return s;
}

/// Applies an additional whole-stimulus phase delay psi2. The IPD density is
/// circularly shifted by psi2 (periodic linear interpolation on the original
/// axis); IAR, ILD and P' curves are returned unchanged.
inline MarginalCurve apply_global_phase(const MarginalCurve& curve, double psi2) {
  if (curve.which != MarginalKind::ipd || curve.axis.size() < 2) return curve;
  MarginalCurve out = curve;
  const auto& ax = curve.axis;
  const auto& dens = curve.density;
  const std::size_t n = ax.size();
  const double lo = ax.front();
  const double hi = ax.back();
  const bool periodic = std::abs(hi - lo - kTwoPi) <= 1e-12 * kTwoPi;
  if (periodic) {
    // Whole-step shifts on a uniform grid rotate samples without interpolation.
    const double step = kTwoPi / static_cast<double>(n - 1);
    const double k = psi2 / step;
    const double k_round = std::round(k);
    if (std::abs(k - k_round) < 1e-9) {
      const auto period = static_cast<long long>(n - 1);
      const long long shift = static_cast<long long>(k_round) % period;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const long long src = ((static_cast<long long>(i) - shift) % period + period) % period;
        out.density[i] = dens[static_cast<std::size_t>(src)];
      }
      out.density[n - 1] = out.density[0];
      return out;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double src = ax[i] - psi2;
    if (periodic) {
      src = lo + std::fmod(std::fmod(src - lo, kTwoPi) + kTwoPi, kTwoPi);
    } else {
      src = wrap_angle(src);
    }
    if (src < lo || src > hi) {
      out.density[i] = 0.0;
      continue;
    }
    const auto it = std::upper_bound(ax.begin(), ax.end(), src);
    std::size_t j = static_cast<std::size_t>(it - ax.begin());
    if (j == 0) j = 1;
    if (j >= n) j = n - 1;
    const double x0 = ax[j - 1];
    const double x1 = ax[j];
    const double t = (src - x0) / (x1 - x0);
    out.density[i] = (1.0 - t) * dens[j - 1] + t * dens[j];
  }
  return out;
}

}  // namespace interaural
