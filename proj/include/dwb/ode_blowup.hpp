#pragma once

// Comparison ODEs F'' = k·w(t)·F^p with
//   plain:            w(t) = (t+R)^{-q}
//   log variants:     w(t) = [ln(t+R)]^{-q/2} (t+R)^{-q}
// integrated to finite-time blow-up or a horizon.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace dwb
{

enum class OdeVariant
{
  plain,
  log_subcritical,
  log_critical
};

std::string to_string(OdeVariant v);
OdeVariant parse_ode_variant(std::string const &name);

struct OdeBlowupSpec
{
  double p = 2.0;
  double a = 1.0;
  double q = 0.0;
  double k = 1.0;
  double delta = 1.0;
  double R = 1.0;
  OdeVariant variant = OdeVariant::plain;
  double K0 = 1.0;
  double K1 = 1.0;
  double T0 = 1.0;

  void validate() const;
  /// Coefficient multiplying w(t)·F^p: K1 for log_critical, k otherwise.
  double coefficient() const;
  double weight(double t) const;
};

enum class Classification
{
  supercritical,
  critical,
  subcritical
};

std::string to_string(Classification c);

/// Sign of (p-1)a - (q-2), zero within relative 1e-12.
Classification sideris_condition(OdeBlowupSpec const &spec);

enum class OdeOutcome
{
  blew_up,
  horizon_reached,
  inconclusive
};

std::string to_string(OdeOutcome o);

struct BlowupReport
{
  OdeOutcome outcome = OdeOutcome::inconclusive;
  bool blew_up = false;
  /// Last time reached by the integrator.
  double t_end = 0.0;
  /// Extrapolated blow-up time; meaningful when blew_up.
  double t_blowup_est = 0.0;
  double f_max = 0.0;
  std::size_t steps = 0;
  std::string detail;
};

struct OdeTolerances
{
  double rtol = 1e-10;
  double atol = 1e-300;
  double blowup_threshold = 1e12;
  /// Relative agreement required between the last three blow-up time estimates.
  double extrapolation_rtol = 1e-6;
  std::size_t max_steps = 5'000'000;

  static OdeTolerances defaults() { return {}; }
  static OdeTolerances tight();
};

/// Blow-up time of the local model F ~ c (T - t)^{-2/(p-1)} from the tangent
/// line of F^{-(p-1)/2}: T = t + 2F / ((p-1)F').
double tangent_blowup_time(double t, double F, double dF, double p);

/// Integrates from t = t0. Throws DomainError for F(t0) <= 0 or F'(t0) < 0.
BlowupReport integrate_from(OdeBlowupSpec const &spec, double t0, double f0, double f0prime,
                            double t_max, OdeTolerances const &tol = {});

/// Integration from t = 0; requires f0 >= δR^a and f0prime >= 0.
BlowupReport integrate(OdeBlowupSpec const &spec, double f0, double f0prime, double t_max,
                       OdeTolerances const &tol = {});

struct ThresholdScan
{
  std::vector<double> k0;
  std::vector<BlowupReport> reports;
  /// Smallest K0 in the grid that blew up.
  std::optional<double> threshold;
  /// Every grid value at or above the threshold blew up.
  bool monotone = false;
};

/// For each K0: F(T0) = K0 (T0+R)^a, F'(T0) = a K0 (T0+R)^{a-1}. Requires a
/// log_critical spec and increasing K0 values.
ThresholdScan critical_threshold_scan(OdeBlowupSpec const &spec, std::vector<double> const &k0_grid,
                                      double t_max, OdeTolerances const &tol = {});

struct GridCell
{
  double a = 0.0;
  double q = 0.0;
  double p = 0.0;
  Classification classification = Classification::supercritical;
  BlowupReport report;
};

struct GridScanOptions
{
  double k = 1.0;
  double delta = 1.0;
  double R = 1.0;
  double horizon = 1e6;
  OdeVariant variant = OdeVariant::plain;
  unsigned jobs = 1;
};

/// Runs every (a, q, p) triple from the envelope data F(0) = δR^a,
/// F'(0) = aδR^{a-1}. Cells are ordered a-major, then q, then p.
std::vector<GridCell> classify_grid(std::vector<double> const &a_values,
                                    std::vector<double> const &q_values,
                                    std::vector<double> const &p_values,
                                    GridScanOptions const &opts, OdeTolerances const &tol = {});

/// Supercritical cells that did not report blow-up.
std::size_t count_supercritical_failures(std::vector<GridCell> const &cells);

} // namespace dwb
