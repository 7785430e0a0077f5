#include "dwb/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dwb
{

void FunctionalTrace::push_back(TraceRow const &row)
{
  times.push_back(row.t);
  F0.push_back(row.F0);
  F1.push_back(row.F1);
  sup_norm.push_back(row.sup_norm);
  l2_norm.push_back(row.l2_norm);
  nonlin_weighted.push_back(row.nonlin_weighted);
  tail_ratio.push_back(row.tail_ratio);
}

TraceRow FunctionalTrace::row(std::size_t i) const
{
  return TraceRow{times[i], F0[i], F1[i], sup_norm[i], l2_norm[i], nonlin_weighted[i],
                  tail_ratio[i]};
}

FunctionalTrace FunctionalTrace::slice(std::size_t first, std::size_t last) const
{
  FunctionalTrace out;
  last = std::min(last, size());
  for (std::size_t i = first; i < last; ++i)
    out.push_back(row(i));
  return out;
}

void FunctionalTrace::validate() const
{
  std::size_t const k = times.size();
  if (F0.size() != k || F1.size() != k || sup_norm.size() != k || l2_norm.size() != k ||
      nonlin_weighted.size() != k || tail_ratio.size() != k)
    throw DomainError("trace series differ in length");
  for (std::size_t i = 1; i < k; ++i)
    if (!(times[i] > times[i - 1]))
      throw DomainError("trace times must be strictly increasing");
}

TraceRow compute_functionals(SolutionState const &state, TestFunctionSet const &tf, double p)
{
  RadialGrid const &grid = tf.grid;
  int const n = tf.dim.n();
  std::size_t const m = grid.size();
  if (state.u.size() != m)
    throw DomainError("state and test functions live on different grids");

  std::vector<double> a(m), b(m), c(m), d(m);
  for (std::size_t i = 0; i < m; ++i)
  {
    double const u = state.u[i];
    a[i] = u * tf.phi0[i];
    b[i] = u == 0.0 ? 0.0 : u * std::exp(tf.log_phi1[i] - state.t);
    c[i] = abs_pow(u, p) * tf.phi0[i];
    d[i] = u * u;
  }
  TraceRow row;
  row.t = state.t;
  row.F0 = radial_quadrature(grid, a, n);
  row.F1 = radial_quadrature(grid, b, n);
  row.nonlin_weighted = radial_quadrature(grid, c, n);
  row.l2_norm = std::sqrt(radial_quadrature(grid, d, n));
  row.sup_norm = sup_norm(state.u);
  return row;
}

DataIntegrals data_integrals(RadialProblem const &problem, TestFunctionSet const &tf)
{
  RadialGrid const &grid = tf.grid;
  std::vector<double> f0(grid.size(), 0.0), f1(grid.size(), 0.0);
  for (std::size_t i = 1; i + 1 < grid.size(); ++i)
  {
    double const r = grid.node(i);
    f0[i] = tf.phi1[i] * problem.u0(r);
    f1[i] = tf.phi1[i] * problem.u1(r);
  }
  return DataIntegrals{radial_quadrature(grid, f0, tf.dim.n()),
                       radial_quadrature(grid, f1, tf.dim.n())};
}

double lemma9_bound(double eps, DataIntegrals const &d, double t)
{
  if (!(t >= 0.0))
    throw DomainError("lemma9_bound requires t >= 0");
  double const e = std::exp(-1.5 * t);
  return (eps / 3.0 * (1.0 - e) + eps * e) * d.phi1_u0 + 2.0 * eps / 3.0 * (1.0 - e) * d.phi1_u1;
}

double lemma9_bound(RadialProblem const &problem, TestFunctionSet const &tf, double t)
{
  return lemma9_bound(problem.eps, data_integrals(problem, tf), t);
}

Lemma9Certificate certify_lemma9(FunctionalTrace const &trace, RadialProblem const &problem,
                                 TestFunctionSet const &tf)
{
  trace.validate();
  DataIntegrals const d = data_integrals(problem, tf);
  Lemma9Certificate cert;
  cert.int_phi1_u0 = d.phi1_u0;
  cert.int_phi1_u1 = d.phi1_u1;
  cert.c0 = d.phi1_u0 / 3.0;
  cert.margin = std::numeric_limits<double>::infinity();
  cert.worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trace.size(); ++i)
  {
    double const t = trace.times[i];
    double const gap = trace.F1[i] - lemma9_bound(problem.eps, d, t);
    double const psi_mass =
        radial_quadrature(tf.grid, tf.phi1, tf.dim.n(), t + problem.R) * std::exp(-t);
    double const tol = 1e-6 * trace.sup_norm[i] * psi_mass;
    cert.margin = std::min(cert.margin, gap);
    cert.worst_slack = std::min(cert.worst_slack, gap + tol);
  }
  if (trace.size() == 0)
    cert.margin = cert.worst_slack = 0.0;
  cert.holds = cert.worst_slack >= 0.0;
  return cert;
}

namespace
{

double uniform_cadence(std::vector<double> const &times)
{
  double const dt = times[1] - times[0];
  for (std::size_t i = 1; i + 1 < times.size(); ++i)
    if (std::abs((times[i + 1] - times[i]) - dt) > 1e-6 * std::abs(dt))
      throw DomainError("trace cadence is not uniform");
  return dt;
}

} // namespace

IdentityCheck check_f0_identity(FunctionalTrace const &trace)
{
  trace.validate();
  if (trace.size() < 5)
    throw DomainError("identity check needs at least 5 rows");
  double const dt = uniform_cadence(trace.times);
  IdentityCheck out;
  double scale = 0.0;
  for (std::size_t i = 1; i + 1 < trace.size(); ++i)
  {
    double const second = (trace.F0[i + 1] - 2.0 * trace.F0[i] + trace.F0[i - 1]) / (dt * dt);
    double const r = second - trace.nonlin_weighted[i];
    out.residuals.push_back(r);
    out.max_abs = std::max(out.max_abs, std::abs(r));
    scale = std::max(scale, std::abs(trace.nonlin_weighted[i]));
  }
  out.relative = scale > 0.0 ? out.max_abs / scale : out.max_abs;
  return out;
}

double inequality_weight(int n, double p, double R, double t)
{
  double const s = t + R;
  if (n >= 3)
    return std::pow(s, -n * (p - 1.0));
  if (n == 1)
    return std::pow(s, -2.0 * (p - 1.0));
  return std::pow(std::log(s), -(p - 1.0)) * std::pow(s, -2.0 * (p - 1.0));
}

double inequality_constant(Dimension const &dim, double p)
{
  int const n = dim.n();
  if (n >= 3)
    return std::pow(unit_ball_volume(n), -(p - 1.0));
  if (n == 1)
    return std::pow(2.0, p - 1.0);
  if (dim.r0() < 1.0)
    throw DomainError("n = 2 constant needs r0 >= 1 so that ln(r/r0) <= ln r");
  return std::pow(std::numbers::pi, -(p - 1.0));
}

InequalityCheck check_differential_inequality(FunctionalTrace const &trace, Dimension const &dim,
                                              double p, double R, double rel_tol)
{
  trace.validate();
  if (trace.size() == 0)
    throw DomainError("empty trace window");
  InequalityCheck out;
  out.k_theory = inequality_constant(dim, p);
  out.k_fit = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trace.size(); ++i)
  {
    if (!(trace.F0[i] > 0.0))
      throw DomainError("inequality window contains F0 <= 0");
    double const w = inequality_weight(dim.n(), p, R, trace.times[i]);
    double const ratio = trace.nonlin_weighted[i] / (w * std::pow(trace.F0[i], p));
    out.ratios.push_back(ratio);
    out.k_fit = std::min(out.k_fit, ratio);
    if (out.k_theory > ratio * (1.0 + rel_tol))
      ++out.violations;
  }
  return out;
}

double f0_target_exponent(int n, double p)
{
  if (n == 1)
    return 2.0;
  if (n == 2)
    return 3.0 - p / 2.0;
  return n + 1.0 - (n - 1.0) * p / 2.0;
}

LowerBoundFit check_f0_lower_bound(FunctionalTrace const &trace, int n, double p, double R)
{
  trace.validate();
  if (trace.size() < 2)
    throw DomainError("lower-bound fit needs at least two rows");
  LowerBoundFit out;
  out.target_exponent = f0_target_exponent(n, p);
  out.delta_fit = std::numeric_limits<double>::infinity();
  std::vector<double> x, y;
  for (std::size_t i = 0; i < trace.size(); ++i)
  {
    if (!(trace.F0[i] > 0.0))
      throw DomainError("lower-bound window contains F0 <= 0");
    double const s = trace.times[i] + R;
    x.push_back(std::log(s));
    y.push_back(std::log(trace.F0[i]));
    out.delta_fit = std::min(out.delta_fit, trace.F0[i] / std::pow(s, out.target_exponent));
  }
  out.exponent_fit = fit_line(x, y).slope;
  return out;
}

CriticalGrowthCheck check_critical_growth(FunctionalTrace const &trace, double p, double R)
{
  trace.validate();
  if (trace.size() < 4)
    throw DomainError("critical growth check needs at least 4 rows");
  double const a = f0_target_exponent(2, p);
  double const T = trace.times.back();
  auto k0_over = [&](double from) {
    double k = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < trace.size(); ++i)
      if (trace.times[i] >= from)
        k = std::min(k, trace.F0[i] / std::pow(trace.times[i] + R, a));
    return k;
  };
  CriticalGrowthCheck out;
  out.k0_half = k0_over(0.5 * T);
  out.k0_quarter = k0_over(0.75 * T);
  out.increasing = out.k0_quarter > out.k0_half;
  return out;
}

BlowupEstimate extrapolate_blowup_time(FunctionalTrace const &trace, double p, std::size_t window)
{
  trace.validate();
  if (window < 3)
    throw DomainError("extrapolation window must hold at least 3 rows");
  if (trace.size() < window)
    throw DomainError("trace too short for blow-up extrapolation");
  std::size_t const first = trace.size() - window;
  std::vector<double> x, y;
  for (std::size_t i = first; i < trace.size(); ++i)
  {
    if (i > first && !(trace.sup_norm[i] > trace.sup_norm[i - 1]))
      throw DomainError("non-monotone tail: sup-norm is not increasing");
    if (!(trace.sup_norm[i] > 0.0))
      throw DomainError("non-monotone tail: sup-norm vanishes");
    x.push_back(trace.times[i]);
    y.push_back(std::pow(trace.sup_norm[i], -0.5 * (p - 1.0)));
  }
  LinearFit const line = fit_line(x, y);
  if (!(line.slope < 0.0))
    throw DomainError("non-monotone tail: fitted line does not decrease");
  BlowupEstimate est;
  est.t_blowup = -line.intercept / line.slope;
  est.rows_used = window;
  double const k = static_cast<double>(line.count);
  double const se = line.residual_sd / std::abs(line.slope) *
                    std::sqrt(1.0 / k + (est.t_blowup - line.x_mean) * (est.t_blowup - line.x_mean) /
                                            line.sxx);
  est.half_width = 2.0 * se;
  return est;
}

std::size_t pre_blowup_rows(FunctionalTrace const &trace, double growth_factor)
{
  if (trace.size() == 0)
    return 0;
  double const cap = growth_factor * trace.sup_norm.front();
  for (std::size_t i = 0; i < trace.size(); ++i)
    if (trace.sup_norm[i] > cap)
      return i;
  return trace.size();
}

} // namespace dwb
