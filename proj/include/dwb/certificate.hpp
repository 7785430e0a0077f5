#pragma once

// Everything the diagnostics say about one simulation run, bundled with the
// pass/fail verdict of each audit.

#include "dwb/diagnostics.hpp"
#include "dwb/ode_blowup.hpp"
#include "dwb/simulation.hpp"

#include <optional>

namespace dwb
{

struct CertificateOptions
{
  /// The pre-blow-up window ends before ‖u‖_∞ first exceeds this multiple of its t = 0 value.
  double window_growth = 10.0;
  /// The "t sufficiently large" part of the window starts at this fraction of its rows.
  double late_fraction = 0.5;
  double identity_tolerance = 0.02;
  double exponent_tolerance = 0.15;
  /// Accepted ratio band [1/f, f] between ODE and PDE blow-up times.
  double ode_factor = 2.0;
  double ode_horizon = 1e6;
  OdeTolerances ode_tolerances;
};

struct OdeConsistency
{
  OdeBlowupSpec spec;
  double f0 = 0.0;
  double f0prime = 0.0;
  BlowupReport report;
  /// ODE blow-up time over the PDE estimate.
  double ratio = 0.0;
  bool ok = false;
  std::string error;
};

struct RunCertificate
{
  std::size_t rows = 0;
  /// Rows [0, window_rows) form the pre-blow-up window.
  std::size_t window_rows = 0;
  double window_t_end = 0.0;
  /// Rows [late_first, window_rows) form the late window.
  std::size_t late_first = 0;

  Lemma9Certificate lemma9;
  std::optional<IdentityCheck> identity;
  std::optional<InequalityCheck> inequality;
  std::optional<LowerBoundFit> lower_bound;
  std::optional<CriticalGrowthCheck> critical_growth;
  std::optional<OdeConsistency> ode;
  /// Why an optional audit could not be evaluated.
  std::vector<std::string> notes;

  bool blew_up = false;
  double t_blowup_est = 0.0;
  double t_blowup_half_width = 0.0;
  bool support_ok = false;
  double max_tail_ratio = 0.0;

  bool lemma9_ok = false;
  bool identity_ok = false;
  bool inequality_ok = false;
  bool exponent_ok = false;
  bool ode_ok = false;

  /// The invariant audits: support, Lemma 9, identity, inequality.
  bool invariants_ok() const { return support_ok && lemma9_ok && identity_ok && inequality_ok; }
};

/// q and variant of the comparison ODE that matches the dimension case.
OdeBlowupSpec comparison_spec(RadialProblem const &problem, double k, double delta);

RunCertificate certify_run(FunctionalTrace const &trace, SimulationReport const &report,
                           RadialProblem const &problem, TestFunctionSet const &tf,
                           CertificateOptions const &opts = {});

} // namespace dwb
