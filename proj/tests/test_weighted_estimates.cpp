#include "dwb/weighted_estimates.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace dwb;

namespace
{
std::vector<double> log_times(double a, double b, int k)
{
  std::vector<double> t;
  for (int i = 0; i < k; ++i)
    t.push_back(a * std::pow(b / a, double(i) / (k - 1)));
  return t;
}
} // namespace

TEST(Exponents, Conjugate)
{
  EXPECT_DOUBLE_EQ(conjugate_exponent(2.0), 2.0);
  EXPECT_DOUBLE_EQ(conjugate_exponent(3.0), 1.5);
  EXPECT_DOUBLE_EQ(envelope_exponent(1, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(envelope_exponent(3, 2.0), 0.0);
  EXPECT_NEAR(envelope_exponent(3, 3.0), 2.0 - 1.5, 1e-15);
}

TEST(FitDecay, ExactPowerLaw)
{
  auto ts = log_times(10, 100, 16);
  std::vector<double> v;
  for (double t : ts)
    v.push_back(2.5 * std::pow(t + 3.0, -1.5));
  auto fit = fit_decay(ts, v, 3.0, std::nullopt, DecayBound{-1.5, 0.0});
  EXPECT_NEAR(fit.fitted_exponent, -1.5, 1e-6);
  EXPECT_NEAR(fit.max_ratio, 2.5, 1e-9);
}

TEST(FitDecay, LogCorrected)
{
  auto ts = log_times(10, 100, 16);
  std::vector<double> v;
  for (double t : ts)
    v.push_back(std::pow(t + 3.0, -1.0) * std::pow(std::log(t + 3.0), -2.0));
  auto fit = fit_decay(ts, v, 3.0, -2.0, DecayBound{-1.0, -2.0});
  EXPECT_NEAR(fit.fitted_exponent, -1.0, 1e-3);
}

TEST(FitDecay, Constant)
{
  auto ts = log_times(10, 100, 8);
  std::vector<double> v(ts.size(), 4.0);
  auto fit = fit_decay(ts, v, 1.0, std::nullopt, DecayBound{});
  EXPECT_NEAR(fit.fitted_exponent, 0.0, 1e-12);
  EXPECT_TRUE(ratio_nonincreasing_final_decade(fit));
}

TEST(FitDecay, RejectsShortRange)
{
  auto ts = log_times(10, 50, 16);
  std::vector<double> v(ts.size(), 1.0);
  EXPECT_ANY_THROW(fit_decay(ts, v, 1.0, std::nullopt, DecayBound{}));
}

TEST(Integrals, PositiveAndGridStable)
{
  auto make = [](double h) {
    return make_test_functions(Dimension::exterior_ball(3, 1.0), RadialGrid::with_spacing(1.0, 60.0, h));
  };
  auto coarse = make(2e-3), fine = make(1e-3);
  for (double t : {0.0, 5.0, 20.0})
  {
    double const a = integral_lemma7(coarse, 2.0, t, 3.0);
    double const b = integral_lemma7(fine, 2.0, t, 3.0);
    EXPECT_GT(b, 0.0);
    EXPECT_NEAR(a / b, 1.0, 0.01) << t;
    double const c = integral_lemma8(fine, 2.0, t, 3.0);
    EXPECT_GE(c, b);  // φ0 <= 1 for n = 3
  }
}

TEST(Integrals, LogFormAgrees)
{
  auto tf = make_test_functions(Dimension::half_line(), RadialGrid::with_spacing(0.0, 40.0, 1e-3));
  for (double t : {1.0, 10.0})
  {
    EXPECT_NEAR(std::exp(log_integral_lemma7(tf, 2.0, t, 3.0)) / integral_lemma7(tf, 2.0, t, 3.0), 1.0, 1e-10);
    EXPECT_NEAR(std::exp(log_integral_lemma8(tf, 2.0, t, 3.0)) / integral_lemma8(tf, 2.0, t, 3.0), 1.0, 1e-10);
  }
}
