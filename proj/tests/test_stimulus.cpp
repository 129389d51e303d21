#include <gtest/gtest.h>

#include <cmath>

#include "interaural/random.hpp"
#include "interaural/stimulus.hpp"

using namespace interaural;

TEST(StimulusParams, ValidatesAndNormalizes) {
  EXPECT_THROW(StimulusParams(-1.0, 1.0, 1.0), ParameterError);
  EXPECT_THROW(StimulusParams(1.0, 1.0, 0.0), ParameterError);
  EXPECT_THROW(StimulusParams(1.0, NAN, 1.0), ParameterError);
  EXPECT_THROW(StimulusParams(0.0, 1.0, 1.0), DegenerateStimulusError);
  EXPECT_THROW(StimulusParams(1.0, 0.0, 1.0), DegenerateStimulusError);
  EXPECT_THROW(StimulusParams(1.0, 4.0 * kPi, 1.0), DegenerateStimulusError);

  const StimulusParams p(1.0, 3.0 * kPi / 2.0, 1.0);
  EXPECT_NEAR(p.tone_ipd(), -kPi / 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(StimulusParams(1.0, -kPi, 1.0).tone_ipd(), kPi);

  const auto q = StimulusParams::from_snr_db(-10.0, kPi);
  EXPECT_NEAR(q.snr(), 0.1, 1e-15);
  EXPECT_NEAR(q.snr_db(), -10.0, 1e-12);
  EXPECT_NEAR(q.tone_power(), 0.2, 1e-15);
  EXPECT_DOUBLE_EQ(StimulusParams(2.0, 1.0, 2.0).snr(), 1.0);
}

TEST(JointRIpd, ClosedFormValue) {
  const StimulusParams p(1.0, kPi, 1.0);
  EXPECT_NEAR(joint_r_ipd_pdf(p, 1.0, kPi / 2), std::exp(-0.5) / (2.0 * kPi), 1e-15);
  EXPECT_NEAR(joint_r_ipd_pdf(p, 1.0, kPi / 2), 0.0965324, 5e-8);
}

TEST(JointRIpd, SingularPointIsZero) {
  for (double psi : {kPi / 4, kPi / 2, kPi, -1.0}) {
    const StimulusParams p(1.0, psi, 1.0);
    EXPECT_EQ(joint_r_ipd_pdf(p, 1.0, 0.0), 0.0);
    EXPECT_EQ(joint_r_ipd_pdf(p, 0.0, 0.3), 0.0);
    const double near = joint_r_ipd_pdf(p, 1.0 + 1e-9, 1e-9);
    EXPECT_TRUE(std::isfinite(near));
    EXPECT_EQ(near, 0.0);
  }
}

TEST(JointRIpd, ReciprocityExample) {
  const StimulusParams p(1.0, kPi / 2, 1.0);
  const double a = joint_r_ipd_pdf(p, 2.0, 0.3);
  const double b = joint_r_ipd_pdf(p, 0.5, 0.3);
  EXPECT_NEAR(a, 0.0907, 5e-5);
  EXPECT_NEAR(b, 0.3628, 2e-4);  // 4 x 0.0907, so four times its rounding
  EXPECT_NEAR(b, 4.0 * a, 1e-15);
}

TEST(JointRIpd, PositiveAtZeroIpdAwayFromUnitRatio) {
  const StimulusParams p(1.0, kPi, 1.0);
  EXPECT_NEAR(joint_r_ipd_pdf(p, 2.0, 0.0), 4.0 / kPi * std::exp(-4.5), 1e-15);
}

TEST(JointRIpd, RejectsOutOfDomain) {
  const StimulusParams p(1.0, kPi, 1.0);
  EXPECT_THROW(joint_r_ipd_pdf(p, -0.1, 0.0), ParameterError);
  EXPECT_THROW(joint_r_ipd_pdf(p, 1.0, 3.2), ParameterError);
  EXPECT_EQ(joint_r_ipd_pdf(p, 1e300, 0.5), 0.0);
}

TEST(JointPowIpd, ClosedFormValue) {
  const StimulusParams p(1.0, kPi, 1.0);
  const auto f = joint_pow_ipd_pdf(p, 1.0, kPi / 2);
  ASSERT_TRUE(f.has_value());
  EXPECT_NEAR(*f, std::exp(-0.5) / (2.0 * kPi * std::sqrt(3.0)), 1e-15);
  EXPECT_NEAR(*f, 0.0557325, 5e-7);
}

TEST(JointPowIpd, OutsideSupport) {
  const StimulusParams p(1.0, kPi, 1.0);
  EXPECT_FALSE(joint_pow_ipd_pdf(p, 2.5, kPi / 2).has_value());
  EXPECT_FALSE(joint_pow_ipd_pdf(p, 2.0, kPi / 2).has_value());
  EXPECT_TRUE(joint_pow_ipd_pdf(p, 1.999, kPi / 2).has_value());
  EXPECT_EQ(joint_pow_ipd_pdf_or_zero(p, 2.5, kPi / 2), 0.0);
  EXPECT_EQ(joint_pow_ipd_pdf(p, 0.0, 1.0).value(), 0.0);
}

TEST(JointPowIpd, DivergesTowardBoundary) {
  const StimulusParams p(1.0, kPi, 1.0);
  const double a = *joint_pow_ipd_pdf(p, 2.0 - 1e-4, kPi / 2);
  const double b = *joint_pow_ipd_pdf(p, 2.0 - 1e-8, kPi / 2);
  EXPECT_NEAR(b / a, 100.0, 0.1);
}

TEST(Support, PHatValues) {
  const StimulusParams p(1.0, kPi, 1.0);
  EXPECT_DOUBLE_EQ(support_p_hat(p, kPi / 2), 2.0);
  EXPECT_TRUE(std::isinf(support_p_hat(p, 0.0)));
  for (double psi : {kPi / 4, kPi / 2, 3 * kPi / 4, kPi, -kPi / 3}) {
    const StimulusParams q(1.7, psi, 0.4);
    EXPECT_EQ(support_p_hat(q, psi), q.tone_power());
    EXPECT_EQ(support_p_hat(q, -psi), q.tone_power());
    EXPECT_EQ(support_p_hat(q, kPi), q.half_chord_sq());
    EXPECT_EQ(support_p_hat(q, -kPi), q.half_chord_sq());
  }
}

TEST(Support, PhiHatValues) {
  const StimulusParams p(1.0, kPi, 1.0);
  EXPECT_NEAR(support_phi_hat(p, 2.0), kPi / 2, 1e-15);
  EXPECT_NEAR(support_phi_hat(p, 4.0), kPi / 3, 1e-15);
  EXPECT_DOUBLE_EQ(support_phi_hat(p, 1.0), kPi);
  EXPECT_DOUBLE_EQ(support_phi_hat(p, 0.3), kPi);
  EXPECT_THROW(support_phi_hat(p, 0.0), ParameterError);
  const StimulusParams q(2.0, kPi / 3, 1.0);
  double prev = kPi;
  for (double x = 0.1; x < 50.0; x *= 1.3) {
    const double w = support_phi_hat(q, x);
    EXPECT_LE(w, prev);
    prev = w;
    if (w < kPi) {
      EXPECT_NEAR(support_p_hat(q, w), x, 1e-12 * x);
      // Inverse formula written with arccos.
      EXPECT_NEAR(w, std::acos(1.0 - q.tone_power() * (1.0 - std::cos(q.tone_ipd())) / x), 1e-7);
    }
  }
}

TEST(Support, GVanishesOnBoundary) {
  SubstreamRng rng(3, 0);
  for (int i = 0; i < 2000; ++i) {
    const StimulusParams p(0.2 + 3.0 * rng.uniform(), -kPi + kTwoPi * rng.uniform_open_zero() + 1e-9, 1.0);
    const double d = -kPi + kTwoPi * rng.uniform_open_zero();
    if (d == 0.0) continue;
    const double ph = support_p_hat(p, d);
    const double ch = std::cos(0.5 * d);
    const double scale = 4.0 * p.half_chord_sq() * (p.half_chord_sq() + ph * ch * ch);
    EXPECT_LE(std::abs(pow_support_g(p, ph, d)) / scale, 1e-10);
    EXPECT_GT(pow_support_g(p, 0.5 * ph, d), 0.0);
    EXPECT_LT(pow_support_g(p, 1.01 * ph, d), 0.0);
  }
}

TEST(Support, FactoredGMatchesDefinition) {
  const StimulusParams p(1.3, 2.0, 1.0);
  for (double pp : {0.1, 0.7, 1.5}) {
    for (double d : {-2.5, -0.4, 0.9, 3.0}) {
      const double c2 = p.tone_power();
      const double s2 = p.half_sin() * p.half_sin();
      const double g = 2.0 * c2 * s2 * (2.0 * pp * std::cos(d) - c2 * (std::cos(p.tone_ipd()) - 1.0)) -
                       pp * pp * std::sin(d) * std::sin(d);
      EXPECT_NEAR(pow_support_g(p, pp, d), g, 1e-13);
    }
  }
}

TEST(Identities, ReflectionAndSnrEquivalence) {
  SubstreamRng rng(11, 0);
  for (int i = 0; i < 10000; ++i) {
    const double psi = -kPi + kTwoPi * rng.uniform_open_zero();
    if (std::abs(psi) < 1e-6) continue;
    const StimulusParams p(0.1 + 5.0 * rng.uniform(), psi, 0.5 + rng.uniform());
    const StimulusParams m(p.tone_amplitude(), -psi, p.noise_variance());
    const double k = std::exp(-4.0 + 8.0 * rng.uniform());
    const StimulusParams s(std::sqrt(k) * p.tone_amplitude(), psi, k * p.noise_variance());
    const double r = std::exp(-4.0 + 8.0 * rng.uniform());
    const double d = -kPi + kTwoPi * rng.uniform_open_zero();
    const double f = joint_r_ipd_pdf(p, r, d);
    if (f < 1e-290) continue;
    EXPECT_NEAR(joint_r_ipd_pdf(m, r, -d), f, 1e-12 * f);
    EXPECT_NEAR(joint_r_ipd_pdf(s, r, d), f, 1e-12 * f);
    // Power-of-two ratio so that 1/r carries no rounding of its own.
    const double r2 = std::ldexp(1.0, static_cast<int>(std::floor(12.0 * rng.uniform())) - 6);
    const double f2 = joint_r_ipd_pdf(p, r2, d);
    if (f2 >= 1e-290) {
      EXPECT_NEAR(joint_r_ipd_pdf(p, 1.0 / r2, d), r2 * r2 * f2, 1e-12 * f2 * r2 * r2);
    }
  }
}

TEST(IldTransform, Examples) {
  EXPECT_EQ(ild_from_iar(1.0), 0.0);
  EXPECT_NEAR(ild_from_iar(2.0), 6.0206, 1e-4);
  EXPECT_NEAR(iar_from_ild(-20.0), 0.1, 1e-16);
  EXPECT_THROW(ild_from_iar(0.0), ParameterError);
  for (double dl : {-33.0, -1.0, 0.5, 17.0}) EXPECT_NEAR(ild_from_iar(iar_from_ild(dl)), dl, 1e-13);
}

TEST(WrapAngle, Range) {
  EXPECT_DOUBLE_EQ(wrap_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_angle(-kPi), kPi);
  EXPECT_NEAR(wrap_angle(3 * kPi / 2), -kPi / 2, 1e-15);
  EXPECT_NEAR(wrap_angle(7.0), 7.0 - kTwoPi, 1e-15);
}
