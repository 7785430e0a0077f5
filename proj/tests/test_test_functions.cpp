#include "dwb/test_functions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace dwb;

namespace
{
TestFunctionSet build(int n, double h, double rmax)
{
  Dimension d = n == 1 ? Dimension::half_line() : Dimension::exterior_ball(n, 1.0);
  return make_test_functions(d, RadialGrid::with_spacing(d.r0(), rmax, h));
}

double at(TestFunctionSet const &tf, std::vector<double> const &f, double r)
{
  auto const i = static_cast<std::size_t>(std::lround((r - tf.grid.r0()) / tf.grid.h()));
  return f[i];
}
} // namespace

TEST(Phi0, ClosedForms)
{
  EXPECT_NEAR(phi0_value(Dimension::exterior_ball(3, 1.0), 2.0), 0.5, 1e-15);
  EXPECT_NEAR(phi0_value(Dimension::exterior_ball(2, 1.0), std::numbers::e), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(phi0_value(Dimension::half_line(), 5.0), 5.0);
}

TEST(Phi1, ClosedFormValues)
{
  auto t1 = build(1, 1e-3, 12.0);
  double const s = std::sqrt(2.0);
  // √2·sinh(1/√2) = 1.085442 and (√2/2)·sinh(1/√2) = 0.542721
  EXPECT_NEAR(at(t1, t1.phi1, 1.0), s * std::sinh(1.0 / s), 1e-9);
  EXPECT_NEAR(at(t1, t1.phi1, 1.0), 1.085442, 1e-6);
  auto t3 = build(3, 1e-3, 12.0);
  EXPECT_NEAR(at(t3, t3.phi1, 2.0), s / 2.0 * std::sinh(1.0 / s), 1e-7);
}

TEST(Phi1, HalfLineMatchesSinh)
{
  auto tf = build(1, 1e-3, 10.0);
  double const s = std::sqrt(2.0);
  for (std::size_t i = 1; i < tf.grid.size(); ++i)
  {
    double const x = tf.grid.node(i);
    double const exact = s * std::sinh(x / s);
    EXPECT_NEAR(tf.phi1[i] / exact, 1.0, 1e-8) << x;
  }
}

TEST(TestFunctions, BoundaryAndPositivity)
{
  for (int n : {1, 2, 3, 4})
  {
    auto tf = build(n, 1e-2, 20.0);
    EXPECT_EQ(tf.phi0.front(), 0.0);
    EXPECT_EQ(tf.phi1.front(), 0.0);
    for (std::size_t i = 1; i < tf.grid.size(); ++i)
    {
      ASSERT_GT(tf.phi0[i], 0.0);
      ASSERT_GT(tf.phi1[i], tf.phi1[i - 1]) << "phi1 not increasing, n=" << n;
      ASSERT_GE(tf.phi0[i], tf.phi0[i - 1]);
      if (n >= 3)
        ASSERT_LT(tf.phi0[i], 1.0);
    }
  }
}

TEST(TestFunctions, Phi0LogBoundInPlane)
{
  auto tf = build(2, 1e-2, 200.0);
  for (std::size_t i = 1; i < tf.grid.size(); ++i)
    ASSERT_LE(tf.phi0[i], std::log(tf.grid.node(i)) + 1e-15);
}

TEST(TestFunctions, GrowthRate)
{
  for (int n : {1, 2, 3})
  {
    auto tf = build(n, 1e-3, 40.0);
    EXPECT_NEAR(phi1_growth_rate(tf) * std::sqrt(2.0), 1.0, 0.02) << n;
  }
}

TEST(Psi1, TimeFactor)
{
  auto tf = build(3, 1e-2, 10.0);
  auto p0 = psi1_at(tf, 0.0);
  auto half = psi1_at(tf, std::log(2.0));
  for (std::size_t i = 0; i < p0.size(); ++i)
  {
    EXPECT_EQ(p0[i], tf.phi1[i]);
    EXPECT_NEAR(half[i], tf.phi1[i] / 2.0, 1e-15 * tf.phi1[i]);
  }
}

TEST(Psi1, ReproducesPhi1AfterRescaling)
{
  auto tf = build(3, 1e-2, 10.0);
  for (double t : {1.0, 10.0, 50.0})
  {
    auto p = psi1_at(tf, t);
    for (std::size_t i = 1; i < p.size(); ++i)
      ASSERT_NEAR(p[i] * std::exp(t) / tf.phi1[i], 1.0, 1e-13);
  }
}

TEST(Psi1, TimeDerivative)
{
  auto tf = build(2, 1e-2, 10.0);
  double const h = 1e-4, t = 1.3;
  auto a = psi1_at(tf, t + h), b = psi1_at(tf, t - h), c = psi1_at(tf, t);
  for (std::size_t i = 1; i < c.size(); i += 37)
    EXPECT_NEAR((a[i] - b[i]) / (2 * h) / c[i], -1.0, 1e-8);
}

TEST(Residuals, HarmonicSmall)
{
  auto t1 = build(1, 1e-3, 5.0);
  EXPECT_LT(residual_harmonic(t1), 1e-9);
  auto t3 = build(3, 1e-3, 5.0);
  EXPECT_LT(residual_harmonic(t3), 1e-4);
}

TEST(Residuals, HarmonicSecondOrderInPlane)
{
  double const coarse = residual_harmonic(build(2, 2e-3, 5.0));
  double const fine = residual_harmonic(build(2, 1e-3, 5.0));
  EXPECT_NEAR(coarse / fine, 4.0, 0.4);
}

TEST(Residuals, EigenSecondOrderOnHalfLine)
{
  double const coarse = residual_eigen(build(1, 2e-2, 10.0));
  double const fine = residual_eigen(build(1, 1e-2, 10.0));
  EXPECT_NEAR(coarse / fine, 4.0, 0.4);
  EXPECT_LT(residual_eigen(build(3, 1e-3, 10.0)), 1e-4);
}

TEST(Residuals, EigenPlaneConvergesLinearlyAtBoundary)
{
  // φ1 vanishes linearly at r0 while the stencil error there stays O(h²):
  // the relative residual at the first node is O(h).
  double const coarse = residual_eigen(build(2, 2e-3, 10.0));
  double const fine = residual_eigen(build(2, 1e-3, 10.0));
  EXPECT_NEAR(coarse / fine, 2.0, 0.2);
}
