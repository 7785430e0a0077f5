#include "dwb/ode_blowup.hpp"

#include "dwb/embedded_rk.hpp"
#include "dwb/radial.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

namespace dwb
{

std::string to_string(OdeVariant v)
{
  switch (v)
  {
  case OdeVariant::plain:
    return "plain";
  case OdeVariant::log_subcritical:
    return "log_subcritical";
  case OdeVariant::log_critical:
    return "log_critical";
  }
  return "?";
}

OdeVariant parse_ode_variant(std::string const &name)
{
  if (name == "plain")
    return OdeVariant::plain;
  if (name == "log_subcritical" || name == "log")
    return OdeVariant::log_subcritical;
  if (name == "log_critical")
    return OdeVariant::log_critical;
  throw DomainError("unknown ODE variant '" + name + "'");
}

std::string to_string(Classification c)
{
  switch (c)
  {
  case Classification::supercritical:
    return "supercritical";
  case Classification::critical:
    return "critical";
  case Classification::subcritical:
    return "subcritical";
  }
  return "?";
}

std::string to_string(OdeOutcome o)
{
  switch (o)
  {
  case OdeOutcome::blew_up:
    return "blew_up";
  case OdeOutcome::horizon_reached:
    return "horizon_reached";
  case OdeOutcome::inconclusive:
    return "numerical_inconclusive";
  }
  return "?";
}

OdeTolerances OdeTolerances::tight()
{
  OdeTolerances t;
  t.rtol = 1e-12;
  return t;
}

void OdeBlowupSpec::validate() const
{
  if (!(p > 1.0))
    throw DomainError("p must exceed 1");
  if (!(a >= 1.0))
    throw DomainError("a must be >= 1");
  if (!(k > 0.0))
    throw DomainError("k must be positive");
  if (!(delta > 0.0))
    throw DomainError("delta must be positive");
  if (!(R > 0.0))
    throw DomainError("R must be positive");
  if (variant == OdeVariant::log_critical)
  {
    if (!(K0 > 0.0 && K1 > 0.0 && T0 > 0.0))
      throw DomainError("log_critical requires K0, K1, T0 > 0");
    if (sideris_condition(*this) != Classification::critical)
      throw DomainError("log_critical requires (p-1)a = q-2");
  }
}

double OdeBlowupSpec::coefficient() const
{
  return variant == OdeVariant::log_critical ? K1 : k;
}

double OdeBlowupSpec::weight(double t) const
{
  double const s = t + R;
  double w = std::pow(s, -q);
  if (variant != OdeVariant::plain)
    w *= std::pow(std::log(s), -0.5 * q);
  return w;
}

Classification sideris_condition(OdeBlowupSpec const &spec)
{
  double const lhs = (spec.p - 1.0) * spec.a;
  double const rhs = spec.q - 2.0;
  double const scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
  double const d = lhs - rhs;
  if (std::abs(d) <= 1e-12 * scale)
    return Classification::critical;
  return d > 0.0 ? Classification::supercritical : Classification::subcritical;
}

double tangent_blowup_time(double t, double F, double dF, double p)
{
  if (!(dF > 0.0))
    return std::numeric_limits<double>::infinity();
  return t + 2.0 * F / ((p - 1.0) * dF);
}

namespace
{

// State (t, F, F') advanced in the rescaled variable s with
// dt/ds = (1 + F)^{-(p-1)/2}. Near blow-up F grows exponentially in s,
// which the embedded pair resolves without t-steps collapsing to ulp size.
struct RescaledRhs
{
  OdeBlowupSpec spec;
  double coefficient;

  std::array<double, 3> operator()(double, std::array<double, 3> const &y) const
  {
    double const F = std::max(y[1], 0.0);
    double const sigma = std::pow(1.0 + F, -0.5 * (spec.p - 1.0));
    double const force = coefficient * spec.weight(y[0]) * std::pow(F, spec.p);
    return {sigma, sigma * y[2], sigma * force};
  }
};

} // namespace

BlowupReport integrate_from(OdeBlowupSpec const &spec, double t0, double f0, double f0prime,
                            double t_max, OdeTolerances const &tol)
{
  spec.validate();
  if (!(f0 > 0.0))
    throw DomainError("initial value F(t0) must be positive");
  if (!(f0prime >= 0.0))
    throw DomainError("initial slope F'(t0) must be nonnegative");
  if (!(t_max > t0))
    throw DomainError("horizon must exceed the start time");
  if (spec.variant != OdeVariant::plain && !(t0 + spec.R > 1.0))
    throw DomainError("logarithmic weight requires t0 + R > 1");

  RkOptions opts;
  opts.rtol = tol.rtol;
  opts.atol = tol.atol;
  opts.h_init = 1e-3;
  opts.h_min = 1e-15;

  auto rk = make_rk45<3>(RescaledRhs{spec, spec.coefficient()}, 0.0, {t0, f0, f0prime}, opts);

  BlowupReport rep;
  rep.f_max = f0;
  double const inf = std::numeric_limits<double>::infinity();
  double est[3] = {inf, inf, inf};
  std::size_t n_est = 0;

  auto finish = [&](OdeOutcome outcome, std::string detail) {
    auto const &y = rk.y();
    rep.outcome = outcome;
    rep.blew_up = outcome == OdeOutcome::blew_up;
    rep.t_end = y[0];
    rep.f_max = std::max(rep.f_max, y[1]);
    rep.steps = rk.accepted();
    rep.detail = std::move(detail);
    return rep;
  };

  while (true)
  {
    if (rk.accepted() >= tol.max_steps)
      return finish(OdeOutcome::inconclusive, "step budget exhausted");
    RkStatus const st = rk.step(inf);
    if (st != RkStatus::ok)
    {
      if (rk.y()[1] > tol.blowup_threshold)
      {
        rep.t_blowup_est = est[2];
        return finish(OdeOutcome::blew_up, "threshold crossed; stepper stalled before convergence");
      }
      return finish(OdeOutcome::inconclusive, "step underflow below blow-up threshold");
    }
    auto const &y = rk.y();
    rep.f_max = std::max(rep.f_max, y[1]);
    if (y[0] >= t_max)
      return finish(OdeOutcome::horizon_reached, "horizon reached");

    if (y[1] > tol.blowup_threshold)
    {
      est[0] = est[1];
      est[1] = est[2];
      est[2] = tangent_blowup_time(y[0], y[1], y[2], spec.p);
      ++n_est;
      if (n_est >= 3)
      {
        double const ref = std::abs(est[2]);
        bool const converged = std::abs(est[2] - est[1]) <= tol.extrapolation_rtol * ref &&
                               std::abs(est[1] - est[0]) <= tol.extrapolation_rtol * ref;
        if (converged)
        {
          rep.t_blowup_est = std::max(est[2], y[0]);
          return finish(OdeOutcome::blew_up, "blow-up");
        }
      }
      if (y[1] > 1e300)
      {
        rep.t_blowup_est = std::max(est[2], y[0]);
        return finish(OdeOutcome::blew_up, "blow-up; estimate not converged before overflow");
      }
    }
  }
}

BlowupReport integrate(OdeBlowupSpec const &spec, double f0, double f0prime, double t_max,
                       OdeTolerances const &tol)
{
  double const envelope = spec.delta * std::pow(spec.R, spec.a);
  if (f0 < envelope * (1.0 - 1e-12))
    throw DomainError("F(0) must satisfy F(0) >= delta R^a");
  return integrate_from(spec, 0.0, f0, f0prime, t_max, tol);
}

ThresholdScan critical_threshold_scan(OdeBlowupSpec const &spec, std::vector<double> const &k0_grid,
                                      double t_max, OdeTolerances const &tol)
{
  if (spec.variant != OdeVariant::log_critical)
    throw DomainError("critical_threshold_scan requires the log_critical variant");
  for (std::size_t i = 1; i < k0_grid.size(); ++i)
    if (!(k0_grid[i] > k0_grid[i - 1]))
      throw DomainError("K0 grid must be increasing");

  ThresholdScan scan;
  scan.k0 = k0_grid;
  for (double K0 : k0_grid)
  {
    OdeBlowupSpec s = spec;
    s.K0 = K0;
    double const base = spec.T0 + spec.R;
    double const f0 = K0 * std::pow(base, spec.a);
    double const df0 = spec.a * K0 * std::pow(base, spec.a - 1.0);
    scan.reports.push_back(integrate_from(s, spec.T0, f0, df0, t_max, tol));
  }
  for (std::size_t i = 0; i < scan.reports.size(); ++i)
    if (scan.reports[i].blew_up)
    {
      scan.threshold = scan.k0[i];
      scan.monotone = std::all_of(scan.reports.begin() + static_cast<std::ptrdiff_t>(i),
                                  scan.reports.end(), [](auto const &r) { return r.blew_up; });
      break;
    }
  return scan;
}

std::vector<GridCell> classify_grid(std::vector<double> const &a_values,
                                    std::vector<double> const &q_values,
                                    std::vector<double> const &p_values,
                                    GridScanOptions const &opts, OdeTolerances const &tol)
{
  std::vector<GridCell> cells;
  for (double a : a_values)
    for (double q : q_values)
      for (double p : p_values)
      {
        GridCell c;
        c.a = a;
        c.q = q;
        c.p = p;
        cells.push_back(c);
      }

  auto run_cell = [&](GridCell &c) {
    OdeBlowupSpec s;
    s.p = c.p;
    s.a = c.a;
    s.q = c.q;
    s.k = opts.k;
    s.delta = opts.delta;
    s.R = opts.R;
    s.variant = opts.variant;
    try
    {
      s.validate();
      c.classification = sideris_condition(s);
      double const f0 = s.delta * std::pow(s.R, s.a);
      double const df0 = s.a * s.delta * std::pow(s.R, s.a - 1.0);
      c.report = integrate(s, f0, df0, opts.horizon, tol);
    }
    catch (std::exception const &e)
    {
      // Keep the scan going; the cell is reported, not dropped.
      c.report = BlowupReport{};
      c.report.outcome = OdeOutcome::inconclusive;
      c.report.detail = e.what();
    }
  };

  unsigned const jobs = std::max(1u, opts.jobs);
  if (jobs == 1)
  {
    for (GridCell &c : cells)
      run_cell(c);
    return cells;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < cells.size(); i = next++)
        run_cell(cells[i]);
    });
  for (auto &th : pool)
    th.join();
  return cells;
}

std::size_t count_supercritical_failures(std::vector<GridCell> const &cells)
{
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](GridCell const &c) {
    return c.classification == Classification::supercritical && !c.report.blew_up;
  }));
}

} // namespace dwb
