#include "dwb/weighted_estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dwb
{

namespace
{

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

void check_inputs(TestFunctionSet const &tf, double p, double t, double R)
{
  if (!(p > 1.0))
    throw DomainError("p must exceed 1");
  if (!(t >= 0.0))
    throw DomainError("t must be nonnegative");
  if (t + R > tf.grid.rmax() + 1e-12)
    throw DomainError("domain too small: t + R = " + std::to_string(t + R) +
                      " exceeds rmax = " + std::to_string(tf.grid.rmax()));
  if (!(t + R > tf.grid.r0()))
    throw DomainError("t + R must exceed the obstacle radius");
}

/// ln of the measure weight r^{n-1} (the ω_n factor is added once at the end).
double log_measure(int n, double r) { return n == 1 ? 0.0 : (n - 1) * std::log(r); }

/// Log-space trapezoid over [r0, upper] of exp(g_i) given at nodes 0..j+1.
/// When `midpoint_first_cell` is set, cell [r0, r0+h] uses g_mid instead.
double log_trapezoid(RadialGrid const &grid, std::vector<double> const &g, double upper,
                     bool midpoint_first_cell, double g_mid)
{
  std::size_t const j = grid.last_node_at_or_below(upper);
  std::size_t const last = std::min(j + 1, grid.size() - 1);
  double top = midpoint_first_cell ? g_mid : neg_inf;
  for (std::size_t i = 0; i <= last; ++i)
    top = std::max(top, g[i]);
  if (top == neg_inf)
    return neg_inf;

  auto scaled = [&](std::size_t i) { return std::exp(g[i] - top); };
  double const h = grid.h();
  double sum = 0.0;
  std::size_t start = 0;
  if (midpoint_first_cell)
  {
    double const span = std::min(h, upper - grid.r0());
    sum += span * std::exp(g_mid - top);
    start = 1;
    if (j == 0)
      return top + std::log(sum);
  }
  for (std::size_t i = start; i < j; ++i)
    sum += 0.5 * h * (scaled(i) + scaled(i + 1));
  double const rest = upper - grid.node(j);
  if (rest > 0.0 && j + 1 < grid.size() && !(midpoint_first_cell && j == 0))
  {
    double const frac = rest / h;
    double const end = scaled(j) + frac * (scaled(j + 1) - scaled(j));
    sum += 0.5 * rest * (scaled(j) + end);
  }
  if (!(sum > 0.0))
    return neg_inf;
  return top + std::log(sum);
}

double log_omega(int n) { return n == 1 ? 0.0 : std::log(unit_sphere_area(n)); }

} // namespace

double conjugate_exponent(double p)
{
  if (!(p > 1.0))
    throw DomainError("conjugate exponent requires p > 1");
  return p / (p - 1.0);
}

double envelope_exponent(int n, double p)
{
  double const pc = conjugate_exponent(p);
  return (n - 1) - (n - 1) * pc / 2.0;
}

double log_integral_lemma7(TestFunctionSet const &tf, double p, double t, double R)
{
  check_inputs(tf, p, t, R);
  double const pc = conjugate_exponent(p);
  int const n = tf.dim.n();
  RadialGrid const &grid = tf.grid;
  std::vector<double> g(grid.size(), neg_inf);
  std::size_t const last = std::min(grid.last_node_at_or_below(t + R) + 1, grid.size() - 1);
  for (std::size_t i = 1; i <= last; ++i)
    g[i] = pc * (tf.log_phi1[i] - t) + log_measure(n, grid.node(i));
  return log_omega(n) + log_trapezoid(grid, g, t + R, false, neg_inf);
}

double log_integral_lemma8(TestFunctionSet const &tf, double p, double t, double R)
{
  check_inputs(tf, p, t, R);
  double const pc = conjugate_exponent(p);
  double const w0 = -1.0 / (p - 1.0);
  int const n = tf.dim.n();
  RadialGrid const &grid = tf.grid;
  std::vector<double> g(grid.size(), neg_inf);
  std::size_t const last = std::min(grid.last_node_at_or_below(t + R) + 1, grid.size() - 1);
  for (std::size_t i = 1; i <= last; ++i)
    g[i] = pc * (tf.log_phi1[i] - t) + w0 * std::log(tf.phi0[i]) + log_measure(n, grid.node(i));

  // φ0 and φ1 both vanish on the boundary, so the node value there is 0·∞.
  // The integrand tends to 0 (it behaves like (r - r0)), and the first cell
  // is sampled at its midpoint with cubic Hermite φ1.
  double const h = grid.h();
  double const span = std::min(h, t + R - grid.r0());
  double const r_mid = grid.r0() + 0.5 * span;
  double phi1_mid;
  if (span < h)
    phi1_mid = 0.5 * span; // φ1 ≈ (r - r0) near the boundary
  else
    phi1_mid = 0.5 * (tf.phi1[0] + tf.phi1[1]) + h / 8.0 * (tf.dphi1[0] - tf.dphi1[1]);
  double const g_mid = pc * (std::log(phi1_mid) - t) + w0 * std::log(phi0_value(tf.dim, r_mid)) +
                       log_measure(n, r_mid);
  return log_omega(n) + log_trapezoid(grid, g, t + R, true, g_mid);
}

double integral_lemma7(TestFunctionSet const &tf, double p, double t, double R)
{
  return std::exp(log_integral_lemma7(tf, p, t, R));
}

double integral_lemma8(TestFunctionSet const &tf, double p, double t, double R)
{
  return std::exp(log_integral_lemma8(tf, p, t, R));
}

double DecayBound::operator()(double t, double R) const
{
  double const s = t + R;
  double v = std::pow(s, exponent);
  if (log_exponent != 0.0)
    v *= std::pow(std::log(s), log_exponent);
  return v;
}

EstimateFit fit_decay_log(std::span<double const> ts, std::span<double const> log_values,
                          double R, std::optional<double> log_correction,
                          DecayBound const &bound)
{
  if (ts.size() != log_values.size())
    throw DomainError("fit_decay: times and values differ in length");
  if (ts.size() < 8)
    throw DomainError("fit_decay needs at least 8 samples");
  for (std::size_t i = 0; i < ts.size(); ++i)
  {
    if (i > 0 && !(ts[i] > ts[i - 1]))
      throw DomainError("fit_decay: sample times must be strictly increasing");
    if (!std::isfinite(log_values[i]))
      throw DomainError("fit_decay: values must be positive and finite");
  }
  // The decade is measured on t itself: t in [10, 100] is the canonical window
  // and t + R can never span a full decade there once R > 0.
  if (!(ts.front() > 0.0) || ts.back() < 10.0 * ts.front() * (1.0 - 1e-12))
    throw DomainError("fit_decay: samples must span at least one decade of t");
  if (log_correction && !(ts.front() + R > 1.0))
    throw DomainError("fit_decay: log correction requires t + R > 1");

  std::vector<double> x(ts.size()), y(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i)
  {
    double const s = ts[i] + R;
    x[i] = std::log(s);
    y[i] = log_values[i];
    if (log_correction)
      y[i] -= *log_correction * std::log(std::log(s));
  }
  LinearFit const line = fit_line(x, y);

  EstimateFit fit;
  fit.ts.assign(ts.begin(), ts.end());
  fit.values.resize(ts.size());
  fit.ratios.resize(ts.size());
  fit.fitted_exponent = line.slope;
  fit.max_ratio = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i)
  {
    fit.values[i] = std::exp(log_values[i]);
    fit.ratios[i] = std::exp(log_values[i] - std::log(bound(ts[i], R)));
    fit.max_ratio = std::max(fit.max_ratio, fit.ratios[i]);
  }
  fit.fitted_constant = fit.max_ratio;
  return fit;
}

EstimateFit fit_decay(std::span<double const> ts, std::span<double const> values, double R,
                      std::optional<double> log_correction, DecayBound const &bound)
{
  std::vector<double> logs(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
  {
    if (!(values[i] > 0.0))
      throw DomainError("fit_decay: values must be strictly positive");
    logs[i] = std::log(values[i]);
  }
  return fit_decay_log(ts, logs, R, log_correction, bound);
}

double max_ratio_final_decade(EstimateFit const &fit)
{
  double const hi = fit.ts.back();
  double worst = 0.0;
  for (std::size_t i = 0; i < fit.ts.size(); ++i)
    if (fit.ts[i] >= hi / 10.0)
      worst = std::max(worst, fit.ratios[i]);
  return worst;
}

bool ratio_nonincreasing_final_decade(EstimateFit const &fit)
{
  double const hi = fit.ts.back();
  for (std::size_t i = 1; i < fit.ts.size(); ++i)
    if (fit.ts[i - 1] >= hi / 10.0 && fit.ratios[i] > fit.ratios[i - 1] * (1.0 + 1e-12))
      return false;
  return true;
}

} // namespace dwb
