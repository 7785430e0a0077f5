#pragma once

// Functionals of the multiplier argument evaluated on simulation output:
//   F0(t) = ∫ u φ0 dx,  F1(t) = ∫ u ψ1(·, t) dx,
// and audits of the relations they obey along a run.

#include "dwb/solver.hpp"
#include "dwb/test_functions.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dwb
{

struct TraceRow
{
  double t = 0.0;
  double F0 = 0.0;
  double F1 = 0.0;
  double sup_norm = 0.0;
  double l2_norm = 0.0;
  /// ∫ |u|^p φ0 dx
  double nonlin_weighted = 0.0;
  /// support_tail_ratio at this time
  double tail_ratio = 0.0;
};

struct FunctionalTrace
{
  std::vector<double> times;
  std::vector<double> F0;
  std::vector<double> F1;
  std::vector<double> sup_norm;
  std::vector<double> l2_norm;
  std::vector<double> nonlin_weighted;
  std::vector<double> tail_ratio;

  std::size_t size() const { return times.size(); }
  void push_back(TraceRow const &row);
  TraceRow row(std::size_t i) const;
  /// Rows [first, last).
  FunctionalTrace slice(std::size_t first, std::size_t last) const;
  /// Throws DomainError unless every series has the same length and times increase.
  void validate() const;
};

/// Functionals of one state. Integrals run over the whole grid.
TraceRow compute_functionals(SolutionState const &state, TestFunctionSet const &tf, double p);

struct DataIntegrals
{
  double phi1_u0 = 0.0;
  double phi1_u1 = 0.0;
};

/// ∫ φ1 u0 dx and ∫ φ1 u1 dx (profiles without the ε factor).
DataIntegrals data_integrals(RadialProblem const &problem, TestFunctionSet const &tf);

/// Explicit lower bound for F1(t):
/// (ε/3 (1 - e^{-3t/2}) + ε e^{-3t/2}) ∫φ1u0 + (2ε/3)(1 - e^{-3t/2}) ∫φ1u1.
double lemma9_bound(RadialProblem const &problem, TestFunctionSet const &tf, double t);
double lemma9_bound(double eps, DataIntegrals const &d, double t);

struct Lemma9Certificate
{
  /// (1/3)∫φ1u0: a t-uniform coefficient with F1(t) >= ε c0.
  double c0 = 0.0;
  double int_phi1_u0 = 0.0;
  double int_phi1_u1 = 0.0;
  /// min over rows of F1 - bound.
  double margin = 0.0;
  /// min over rows of (F1 - bound + tol_row); >= 0 means the bound held everywhere.
  double worst_slack = 0.0;
  bool holds = false;
};

/// Per-row tolerance 1e-6·‖u‖_∞·∫_{|x|<=t+R} ψ1(x,t) dx.
Lemma9Certificate certify_lemma9(FunctionalTrace const &trace, RadialProblem const &problem,
                                 TestFunctionSet const &tf);

struct IdentityCheck
{
  /// Second difference of F0 minus ∫|u|^pφ0 at interior rows.
  std::vector<double> residuals;
  double max_abs = 0.0;
  /// max_abs / max ∫|u|^pφ0.
  double relative = 0.0;
};

/// Audit of F0'' = ∫|u|^p φ0 with central differences at the output cadence.
IdentityCheck check_f0_identity(FunctionalTrace const &trace);

struct InequalityCheck
{
  double k_fit = 0.0;
  double k_theory = 0.0;
  std::size_t violations = 0;
  std::vector<double> ratios;
};

/// Weight of the dimension-specific differential inequality at time t.
double inequality_weight(int n, double p, double R, double t);

/// Explicit constant of the inequality: [Vol B^n]^{-(p-1)} (n >= 3),
/// 2^{p-1} (n = 1, φ0 = x), π^{-(p-1)} (n = 2, φ0 = ln(r/r0) <= ln r for r0 >= 1).
double inequality_constant(Dimension const &dim, double p);

InequalityCheck check_differential_inequality(FunctionalTrace const &trace, Dimension const &dim,
                                              double p, double R, double rel_tol = 1e-6);

/// Growth exponent a of the F0 lower bound: n+1-(n-1)p/2 (n >= 3), 2 (n = 1), 3 - p/2 (n = 2).
double f0_target_exponent(int n, double p);

struct LowerBoundFit
{
  double delta_fit = 0.0;
  double exponent_fit = 0.0;
  double target_exponent = 0.0;
};

LowerBoundFit check_f0_lower_bound(FunctionalTrace const &trace, int n, double p, double R);

/// K0 fits min F0/(t+R)^a over [T/2, T] and [3T/4, T] of the given window.
struct CriticalGrowthCheck
{
  double k0_half = 0.0;
  double k0_quarter = 0.0;
  bool increasing = false;
};
CriticalGrowthCheck check_critical_growth(FunctionalTrace const &trace, double p, double R);

struct BlowupEstimate
{
  double t_blowup = 0.0;
  /// Half-width of a two-standard-error interval on the root.
  double half_width = 0.0;
  std::size_t rows_used = 0;
};

/// Root of the least-squares line through sup_norm^{-(p-1)/2} over the final
/// `window` rows. Requires a strictly increasing sup-norm tail.
BlowupEstimate extrapolate_blowup_time(FunctionalTrace const &trace, double p,
                                       std::size_t window = 8);

/// Rows before the sup-norm first exceeds `growth_factor` times its initial value.
std::size_t pre_blowup_rows(FunctionalTrace const &trace, double growth_factor);

} // namespace dwb
