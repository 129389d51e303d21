#pragma once

// Closed-form joint densities of the interaural cues of an N0 S_psi stimulus:
// diotic Gaussian noise plus a tone of amplitude C whose phase is +psi/2 in
// one ear and -psi/2 in the other.
//
// Conventions used throughout the library:
//   z_a = [x + C cos(psi/2)] + i [y + C sin(psi/2)]   (the +psi/2 ear)
//   z_b = [x + C cos(psi/2)] + i [y - C sin(psi/2)]   (the -psi/2 ear)
//   r   = |z_a / z_b|,  dphi = arg(z_a / z_b),  p = |z_a| |z_b|
// with x, y independent N(0, sigma^2).

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace interaural {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Invalid argument to a density or parameter constructor.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// psi = 0 (mod 2 pi): all cue distributions collapse to delta functions.
class DegenerateStimulusError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, kTwoPi);
  if (w <= -kPi) w += kTwoPi;
  return w;
}

class StimulusParams {
 public:
  /// Tone amplitude C, tone IPD psi (radians), noise variance sigma^2.
  StimulusParams(double tone_amplitude, double tone_ipd, double noise_variance)
      : c_(tone_amplitude), psi_(0.0), var_(noise_variance) {
    if (!std::isfinite(tone_amplitude) || !std::isfinite(tone_ipd) ||
        !std::isfinite(noise_variance)) {
      throw ParameterError("stimulus parameters must be finite");
    }
    if (!(noise_variance > 0.0)) throw ParameterError("noise variance must be positive");
    if (tone_amplitude == 0.0) throw DegenerateStimulusError("tone amplitude is zero");
    if (!(tone_amplitude > 0.0)) throw ParameterError("tone amplitude must be positive");
    psi_ = wrap_angle(tone_ipd);
    if (std::sin(0.5 * psi_) == 0.0) {
      throw DegenerateStimulusError("tone IPD is a multiple of 2 pi (diotic stimulus)");
    }
    const double snr = c_ * c_ / (2.0 * var_);
    if (!(snr > 0.0) || !std::isfinite(snr)) throw ParameterError("SNR must be finite and positive");
  }

  /// Builds parameters from an SNR in dB, C^2 = 2 sigma^2 10^(snr/10).
  static StimulusParams from_snr_db(double snr_db, double tone_ipd, double noise_variance = 1.0) {
    if (!std::isfinite(snr_db)) throw ParameterError("SNR must be finite");
    const double c2 = 2.0 * noise_variance * std::pow(10.0, snr_db / 10.0);
    return StimulusParams(std::sqrt(c2), tone_ipd, noise_variance);
  }

  double tone_amplitude() const { return c_; }
  double tone_ipd() const { return psi_; }
  double noise_variance() const { return var_; }

  double tone_power() const { return c_ * c_; }
  double snr() const { return c_ * c_ / (2.0 * var_); }
  double snr_db() const { return 10.0 * std::log10(snr()); }

  /// sin(psi/2), cos(psi/2).
  double half_sin() const { return std::sin(0.5 * psi_); }
  double half_cos() const { return std::cos(0.5 * psi_); }

  /// a^2 = C^2 sin^2(psi/2); the P' support reaches a^2 at dphi = +-pi.
  double half_chord_sq() const {
    const double s = half_sin();
    return c_ * c_ * (s * s);
  }

  /// Same (C, sigma^2) with psi -> -psi.
  StimulusParams mirrored() const {
    StimulusParams m = *this;
    m.psi_ = psi_ == kPi ? kPi : -psi_;
    return m;
  }

 private:
  double c_;
  double psi_;
  double var_;
};

/// One realization of the interaural cues.
struct InterauralSample {
  double iar_r = 1.0;
  double ipd_phi = 0.0;
  double ild_db = 0.0;
  double power_p = 0.0;
};

inline double ild_from_iar(double r) {
  if (!(r > 0.0)) throw ParameterError("IAR must be positive");
  return 20.0 * std::log10(r);
}

inline double iar_from_ild(double dl) { return std::pow(10.0, dl / 20.0); }

namespace detail {

inline void check_ipd(double dphi) {
  if (!(dphi >= -kPi && dphi <= kPi)) throw ParameterError("IPD must lie in [-pi, pi]");
}

// r^2 - 2 r cos(dphi - shift) + 1 written without cancellation near r = 1.
inline double radial_h(double r, double dphi, double shift) {
  const double s = std::sin(0.5 * (dphi - shift));
  return (r - 1.0) * (r - 1.0) + 4.0 * r * (s * s);
}

}  // namespace detail

/// Natural log of the joint density of (IAR, IPD); -inf where the density is 0.
inline double log_joint_r_ipd_pdf(const StimulusParams& params, double r, double dphi) {
  if (!(r >= 0.0)) throw ParameterError("IAR must be non-negative");
  detail::check_ipd(dphi);
  if (r == 0.0 || std::isinf(r)) return -std::numeric_limits<double>::infinity();
  const double h0 = detail::radial_h(r, dphi, 0.0);
  // h0 = 0: singular point; h0 = inf: r so large that the density underflows.
  if (h0 == 0.0 || std::isinf(h0)) return -std::numeric_limits<double>::infinity();
  const double hpsi = detail::radial_h(r, dphi, params.tone_ipd());
  const double kappa = params.tone_power() / params.noise_variance();
  const double s = params.half_sin();
  return std::log(2.0 * kappa * r * (s * s) / kPi) - 2.0 * std::log(h0) -
         0.5 * kappa * hpsi / h0;
}

/// Joint density f_{R,dPhi}(r, dphi).
///
/// Exactly 0 at r = 0 and at the singular point r = 1, dphi = 0, where the
/// exponential factor dominates the 1/h(0)^2 blow-up.
inline double joint_r_ipd_pdf(const StimulusParams& params, double r, double dphi) {
  return std::exp(log_joint_r_ipd_pdf(params, r, dphi));
}

/// Upper limit of P' at a given IPD, C^2 sin^2(psi/2) / sin^2(dphi/2).
/// Equal to C^2 (cos psi - 1) / (cos dphi - 1); +inf at dphi = 0.
inline double support_p_hat(const StimulusParams& params, double dphi) {
  detail::check_ipd(dphi);
  const double sd = std::sin(0.5 * dphi);
  if (sd == 0.0) return std::numeric_limits<double>::infinity();
  const double ratio = params.half_sin() / sd;
  return params.tone_power() * (ratio * ratio);
}

/// Half-width of the IPD support at a given P'. pi when p <= C^2 sin^2(psi/2).
inline double support_phi_hat(const StimulusParams& params, double p) {
  if (!(p > 0.0)) throw ParameterError("P' must be positive");
  const double a2 = params.half_chord_sq();
  if (p <= a2) return kPi;
  return 2.0 * std::asin(std::sqrt(a2 / p));
}

/// g(p', dphi) = 2 C^2 sin^2(psi/2) [2 p' cos dphi - C^2 (cos psi - 1)] - p'^2 sin^2 dphi.
/// Positive strictly inside the P' support, zero on its boundary. Evaluated
/// in the factored form 4 [a^2 - p' sin^2(dphi/2)] [a^2 + p' cos^2(dphi/2)].
inline double pow_support_g(const StimulusParams& params, double p, double dphi) {
  const double a2 = params.half_chord_sq();
  const double sh = std::sin(0.5 * dphi);
  const double ch = std::cos(0.5 * dphi);
  return 4.0 * (a2 - p * (sh * sh)) * (a2 + p * (ch * ch));
}

namespace detail {

// log f_{P',dPhi} without the 1/sqrt(a^2 - p sin^2(dphi/2)) factor, i.e. the
// log of f * sqrt(boundary_gap). Callers that know the gap to the support
// boundary accurately (through a substitution) combine the two themselves.
inline double log_pow_ipd_regular_part(const StimulusParams& params, double p, double dphi) {
  const double var = params.noise_variance();
  const double a2 = params.half_chord_sq();
  const double ch = std::cos(0.5 * dphi);
  const double cot_half = params.half_cos() / params.half_sin();
  // Squared distance of the noise-plus-tone phasor from the tone, written in (p', dphi).
  const double dist2 =
      params.tone_power() + p * std::cos(dphi) - p * std::sin(dphi) * cot_half;
  return std::log(p) - std::log(2.0 * kPi * var) - 0.5 * std::log(4.0 * (a2 + p * (ch * ch))) -
         dist2 / (2.0 * var);
}

}  // namespace detail

/// Natural log of the joint density of (P', IPD), or nullopt outside the support.
inline std::optional<double> log_joint_pow_ipd_pdf(const StimulusParams& params, double p,
                                                   double dphi) {
  if (!(p >= 0.0)) throw ParameterError("P' must be non-negative");
  detail::check_ipd(dphi);
  if (p > support_p_hat(params, dphi)) return std::nullopt;
  const double sh = std::sin(0.5 * dphi);
  const double gap = params.half_chord_sq() - p * (sh * sh);
  // Points within rounding of the boundary count as on it.
  if (!(gap > 4.0 * std::numeric_limits<double>::epsilon() * params.half_chord_sq())) return std::nullopt;
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  return detail::log_pow_ipd_regular_part(params, p, dphi) - 0.5 * std::log(gap);
}

/// Joint density f_{P',dPhi}(p, dphi). Returns nullopt outside the support
/// {g > 0, p <= support_p_hat(dphi)}; the density diverges like 1/sqrt(g)
/// towards the boundary.
inline std::optional<double> joint_pow_ipd_pdf(const StimulusParams& params, double p,
                                               double dphi) {
  const auto lp = log_joint_pow_ipd_pdf(params, p, dphi);
  if (!lp) return std::nullopt;
  return std::exp(*lp);
}

/// Density with the outside-support region read as zero, for integration.
inline double joint_pow_ipd_pdf_or_zero(const StimulusParams& params, double p, double dphi) {
  return joint_pow_ipd_pdf(params, p, dphi).value_or(0.0);
}

}  // namespace interaural
