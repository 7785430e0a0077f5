#pragma once

// Space integrals of powers of ψ1 over Ω ∩ {|x| <= t + R} and power-law fits
// of their decay in t.

#include "dwb/test_functions.hpp"

#include <optional>
#include <span>
#include <vector>

namespace dwb
{

/// Conjugate exponent p/(p-1).
double conjugate_exponent(double p);

/// Exponent n - 1 - (n - 1)p'/2 of the power-law envelope for both weighted integrals.
double envelope_exponent(int n, double p);

/// ∫_{Ω, |x| <= t+R} ψ1(x,t)^{p'} dx, accumulated in log space.
double integral_lemma7(TestFunctionSet const &tf, double p, double t, double R);

/// ∫_{Ω, |x| <= t+R} φ0^{-1/(p-1)} ψ1(x,t)^{p'} dx. The first cell is
/// evaluated at its midpoint because φ0 vanishes on the boundary.
double integral_lemma8(TestFunctionSet const &tf, double p, double t, double R);

/// Natural logarithms of the two integrals (finite even when the values underflow).
double log_integral_lemma7(TestFunctionSet const &tf, double p, double t, double R);
double log_integral_lemma8(TestFunctionSet const &tf, double p, double t, double R);

struct EstimateFit
{
  std::vector<double> ts;
  std::vector<double> values;
  double fitted_exponent = 0.0;
  double fitted_constant = 0.0;
  /// sup over samples of value / bound.
  double max_ratio = 0.0;
  /// value / bound at every sample.
  std::vector<double> ratios;
};

/// Theoretical envelope C·(t+R)^exponent·(ln(t+R))^log_exponent with C = 1.
struct DecayBound
{
  double exponent = 0.0;
  double log_exponent = 0.0;
  double operator()(double t, double R) const;
};

/// Least-squares slope of ln(value) - log_correction·ln ln(t+R) against ln(t+R).
/// `values` may be passed as logarithms via `log_values` to avoid underflow.
/// Requires >= 8 samples with max(t) >= 10·min(t).
EstimateFit fit_decay(std::span<double const> ts, std::span<double const> values, double R,
                      std::optional<double> log_correction, DecayBound const &bound);

EstimateFit fit_decay_log(std::span<double const> ts, std::span<double const> log_values,
                          double R, std::optional<double> log_correction,
                          DecayBound const &bound);

/// Largest ratio over the samples with t >= max(t)/10.
double max_ratio_final_decade(EstimateFit const &fit);

/// True when value/bound never increases between consecutive samples with t >= max(t)/10.
bool ratio_nonincreasing_final_decade(EstimateFit const &fit);

} // namespace dwb
