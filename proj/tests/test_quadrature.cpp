#include <gtest/gtest.h>

#include <cmath>

#include "interaural/quadrature.hpp"
#include "interaural/stimulus.hpp"

using namespace interaural;

namespace {

void expect_bounded(const QuadratureResult& r, double truth, double accuracy) {
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.status, QuadratureStatus::ok);
  EXPECT_NEAR(r.value, truth, accuracy);
  EXPECT_LE(std::abs(r.value - truth), r.abs_error_estimate);
}

}  // namespace

TEST(Quadrature, Square) { expect_bounded(integrate_finite([](double x) { return x * x; }, 0.0, 1.0), 1.0 / 3.0, 1e-12); }

TEST(Quadrature, InverseSqrtSingularity) {
  const auto r = integrate_finite([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  expect_bounded(r, 2.0, 1e-8);
  EXPECT_GT(r.evaluations, 21u);
}

TEST(Quadrature, LogSingularity) {
  expect_bounded(integrate_finite([](double x) { return std::log(x); }, 0.0, 1.0), -1.0, 1e-10);
}

TEST(Quadrature, SemiInfiniteExp) {
  expect_bounded(integrate_semi_infinite([](double x) { return std::exp(-x); }, 0.0), 1.0, 1e-10);
}

TEST(Quadrature, GaussianOnTwoHalfLines) {
  auto g = [](double x) { return std::exp(-x * x); };
  QuadratureResult r = integrate_semi_infinite(g, 0.0);
  accumulate(r, integrate_semi_infinite_below(g, 0.0));
  expect_bounded(r, std::sqrt(kPi), 1e-10);
}

TEST(Quadrature, PolynomialsUpToDegree40) {
  for (int k = 0; k <= 40; ++k) {
    expect_bounded(integrate_finite([k](double x) { return (k + 1) * std::pow(x, k); }, 0.0, 1.0), 1.0, 1e-12);
    expect_bounded(integrate_finite([k](double x) { return std::pow(x, k); }, -1.0, 1.0),
                   k % 2 == 0 ? 2.0 / (k + 1) : 0.0, 1e-12);
  }
}

TEST(Quadrature, ReversedLimitsAndEmptyRange) {
  const auto r = integrate_finite([](double x) { return x; }, 1.0, 0.0);
  EXPECT_NEAR(r.value, -0.5, 1e-15);
  const auto z = integrate_finite([](double x) { return x; }, 2.0, 2.0);
  EXPECT_EQ(z.value, 0.0);
  EXPECT_TRUE(z.converged);
}

TEST(Quadrature, PiecesShareTolerance) {
  const std::vector<double> pts{0.0, 0.25, 1.0, 4.0};
  const auto r = integrate_pieces([](double x) { return std::sqrt(x); }, pts);
  expect_bounded(r, 2.0 / 3.0 * 8.0, 1e-10);
}

TEST(Quadrature, NonConvergenceIsReported) {
  QuadratureConfig cfg;
  cfg.max_subintervals = 3;
  cfg.epsabs = 1e-14;
  cfg.epsrel = 1e-14;
  const auto r = integrate_finite([](double x) { return std::sin(1.0 / x) / x; }, 1e-4, 1.0, cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_NE(r.status, QuadratureStatus::ok);
}

TEST(Quadrature, DivergentIntegralNotConverged) {
  const auto r = integrate_finite([](double x) { return 1.0 / x; }, 0.0, 1.0);
  EXPECT_FALSE(r.converged);
}

TEST(Quadrature, Deterministic) {
  auto f = [](double x) { return std::exp(-x) * std::cos(5.0 * x) / std::sqrt(x); };
  const auto a = integrate_semi_infinite(f, 0.0);
  const auto b = integrate_semi_infinite(f, 0.0);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.abs_error_estimate, b.abs_error_estimate);
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(Quadrature, ConvergedImpliesToleranceMet) {
  QuadratureConfig cfg;
  for (double p : {0.3, 1.0, 2.5}) {
    const auto r = integrate_finite([p](double x) { return std::pow(x, p - 1.0) * std::exp(-x); }, 0.0, 3.0, cfg);
    ASSERT_TRUE(r.converged);
    EXPECT_LE(r.abs_error_estimate, std::max(cfg.epsabs, cfg.epsrel * std::abs(r.value)));
  }
}
