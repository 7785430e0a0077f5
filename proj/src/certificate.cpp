#include "dwb/certificate.hpp"

#include <cmath>
#include <exception>

namespace dwb
{

OdeBlowupSpec comparison_spec(RadialProblem const &problem, double k, double delta)
{
  int const n = problem.dim.n();
  double const p = problem.p;
  OdeBlowupSpec s;
  s.p = p;
  s.a = f0_target_exponent(n, p);
  s.q = n >= 3 ? n * (p - 1.0) : 2.0 * (p - 1.0);
  s.variant = n == 2 ? OdeVariant::log_subcritical : OdeVariant::plain;
  s.k = k;
  s.delta = delta;
  s.R = problem.R;
  return s;
}

RunCertificate certify_run(FunctionalTrace const &trace, SimulationReport const &report,
                           RadialProblem const &problem, TestFunctionSet const &tf,
                           CertificateOptions const &opts)
{
  trace.validate();
  RunCertificate c;
  c.rows = trace.size();
  c.blew_up = report.blew_up;
  c.t_blowup_est = report.t_blowup_est;
  c.t_blowup_half_width = report.t_blowup_half_width;
  c.support_ok = report.support_ok;
  c.max_tail_ratio = report.max_tail_ratio;

  c.lemma9 = certify_lemma9(trace, problem, tf);
  c.lemma9_ok = c.lemma9.holds;

  c.window_rows = pre_blowup_rows(trace, opts.window_growth);
  c.window_t_end = c.window_rows > 0 ? trace.times[c.window_rows - 1] : 0.0;
  c.late_first = static_cast<std::size_t>(std::floor(opts.late_fraction * c.window_rows));
  FunctionalTrace const window = trace.slice(0, c.window_rows);
  FunctionalTrace const late = trace.slice(c.late_first, c.window_rows);

  // Each audit reports what it could not do instead of aborting the rest.
  auto attempt = [&](char const *what, auto &&fn) {
    try
    {
      fn();
    }
    catch (std::exception const &e)
    {
      c.notes.push_back(std::string(what) + ": " + e.what());
    }
  };

  attempt("identity", [&] {
    c.identity = check_f0_identity(window);
    c.identity_ok = c.identity->relative < opts.identity_tolerance;
  });
  attempt("inequality", [&] {
    c.inequality = check_differential_inequality(window, problem.dim, problem.p, problem.R);
    c.inequality_ok = c.inequality->violations == 0;
  });
  attempt("lower_bound", [&] {
    c.lower_bound = check_f0_lower_bound(late, problem.dim.n(), problem.p, problem.R);
    c.exponent_ok = std::abs(c.lower_bound->exponent_fit - c.lower_bound->target_exponent) <=
                    opts.exponent_tolerance;
  });
  if (problem.dim.n() == 2 && std::abs(problem.p - strauss_exponent(2)) < 1e-9)
    attempt("critical_growth",
            [&] { c.critical_growth = check_critical_growth(window, problem.p, problem.R); });

  if (c.inequality && c.lower_bound)
  {
    OdeConsistency oc;
    oc.spec = comparison_spec(problem, c.inequality->k_fit, c.lower_bound->delta_fit);
    oc.f0 = oc.spec.delta * std::pow(oc.spec.R, oc.spec.a);
    oc.f0prime = oc.spec.a * oc.spec.delta * std::pow(oc.spec.R, oc.spec.a - 1.0);
    try
    {
      oc.report = integrate(oc.spec, oc.f0, oc.f0prime, opts.ode_horizon, opts.ode_tolerances);
      if (oc.report.blew_up && c.blew_up && c.t_blowup_est > 0.0)
      {
        oc.ratio = oc.report.t_blowup_est / c.t_blowup_est;
        oc.ok = oc.ratio <= opts.ode_factor && oc.ratio >= 1.0 / opts.ode_factor;
      }
    }
    catch (std::exception const &e)
    {
      oc.error = e.what();
    }
    c.ode_ok = oc.ok;
    c.ode = oc;
  }
  return c;
}

} // namespace dwb
