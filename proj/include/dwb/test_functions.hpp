#pragma once

// Test functions for the multiplier argument:
//   φ0  harmonic, vanishing on the obstacle boundary (closed forms),
//   φ1  radial solution of Δφ1 = φ1/2 with φ1(r0) = 0, φ1'(r0) = 1,
//   ψ1(x, t) = φ1(x) e^{-t}.

#include "dwb/radial.hpp"

#include <vector>

namespace dwb
{

struct TestFunctionSet
{
  Dimension dim;
  RadialGrid grid;
  std::vector<double> phi0;
  /// May contain +inf where φ1 exceeds the double range; log_phi1 is always finite
  /// away from the boundary node (which holds -inf).
  std::vector<double> phi1;
  std::vector<double> log_phi1;
  /// dφ1/dr at the nodes, in the same scaling as phi1.
  std::vector<double> dphi1;
};

/// Closed-form φ0 at radius r: 1 - (r0/r)^{n-2} (n >= 3), ln(r/r0) (n = 2), x (n = 1).
double phi0_value(Dimension const &dim, double r);

std::vector<double> build_phi0(Dimension const &dim, RadialGrid const &grid);

/// Outward adaptive integration of φ'' + ((n-1)/r)φ' = φ/2, landing on every
/// node. Values that would overflow are carried in log form.
struct Phi1Samples
{
  std::vector<double> phi1;
  std::vector<double> log_phi1;
  std::vector<double> dphi1;
};
Phi1Samples build_phi1_samples(Dimension const &dim, RadialGrid const &grid);

std::vector<double> build_phi1(Dimension const &dim, RadialGrid const &grid);

TestFunctionSet make_test_functions(Dimension const &dim, RadialGrid const &grid);

/// ψ1(·, t) = φ1 e^{-t} at the nodes.
std::vector<double> psi1_at(TestFunctionSet const &tf, double t);

/// ln ψ1(·, t); -inf at the boundary node.
std::vector<double> log_psi1_at(TestFunctionSet const &tf, double t);

/// max over interior nodes of |Δ_h φ0|.
double residual_harmonic(TestFunctionSet const &tf);

/// max over interior nodes of |Δ_h φ1 - φ1/2| / φ1.
double residual_eigen(TestFunctionSet const &tf);

/// Slope of ln φ1 + ((n-1)/2) ln r against r over the outer half of the grid.
/// The asymptotic value is 1/√2.
double phi1_growth_rate(TestFunctionSet const &tf);

} // namespace dwb
