#include "dwb/simulation.hpp"
#include "dwb/solver.hpp"
#include "dwb/test_functions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace dwb;

namespace
{
RadialProblem shell_problem(double eps)
{
  RadialProblem pr;
  pr.eps = eps;
  return pr;
}

SolutionState advance(SolutionState s, RadialProblem const &pr, RadialGrid const &g, double dt, double t_end,
                      bool linear)
{
  CnWorkspace ws;
  int const steps = static_cast<int>(std::lround(t_end / dt));
  for (int i = 0; i < steps; ++i)
    s = crank_nicolson_step(s, dt, pr, g, linear, &ws);
  return s;
}

double max_diff(std::vector<double> const &a, std::vector<double> const &b, double scale = 1.0)
{
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - scale * b[i]));
  return m;
}
} // namespace

TEST(Laplacian, HarmonicAndEigenOracles)
{
  Dimension d = Dimension::exterior_ball(3, 1.0);
  auto g = RadialGrid::with_spacing(1.0, 8.0, 1e-3);
  auto tf = make_test_functions(d, g);
  auto lap0 = discrete_laplacian(tf.phi0, d, g);
  auto lap1 = discrete_laplacian(tf.phi1, d, g);
  for (std::size_t i = 1; i + 1 < g.size(); ++i)
  {
    ASSERT_NEAR(lap0[i], 0.0, 1e-5);
    ASSERT_NEAR(lap1[i] / tf.phi1[i], 0.5, 1e-4);
  }
}

TEST(Solver, ZeroDataStaysZero)
{
  RadialProblem pr = shell_problem(0.0);
  SolverConfig cfg;
  cfg.h = 2e-2;
  cfg.dt = 2e-2;
  auto res = run(pr, cfg, 2.0);
  EXPECT_FALSE(res.report.blew_up);
  EXPECT_EQ(res.report.final_sup_norm, 0.0);
  for (double f : res.trace.F0)
    EXPECT_EQ(f, 0.0);
}

TEST(Solver, LinearEnergyDecaysOnHalfLine)
{
  RadialProblem pr;
  pr.dim = Dimension::half_line();
  pr.R = 20.0;
  pr.u0 = Profile::bump(10.0, 8.0);
  pr.u1 = Profile::zero();
  auto g = RadialGrid::with_spacing(0.0, 20.0, 1e-2);
  SolutionState s = initial_state(pr, g);
  for (std::size_t i = 0; i < g.size(); ++i)
    s.u[i] = std::sin(std::numbers::pi * g.node(i) / g.rmax());
  s.u.front() = s.u.back() = 0.0;
  CnWorkspace ws;
  double e = linear_energy(s, g, 1);
  for (int k = 0; k < 400; ++k)
  {
    s = crank_nicolson_step(s, 5e-2, pr, g, true, &ws);
    double const next = linear_energy(s, g, 1);
    ASSERT_LE(next, e * (1.0 + 1e-12)) << "step " << k;
    e = next;
  }
  EXPECT_LT(e, linear_energy(initial_state(pr, g), g, 1));
}

TEST(Solver, SecondOrderInTime)
{
  RadialProblem pr = shell_problem(1.0);
  auto g = RadialGrid::with_spacing(1.0, 6.0, 1e-2);
  SolutionState s0 = initial_state(pr, g);
  auto a = advance(s0, pr, g, 4e-2, 1.0, false);
  auto b = advance(s0, pr, g, 2e-2, 1.0, false);
  auto c = advance(s0, pr, g, 1e-2, 1.0, false);
  double const ratio = max_diff(a.u, b.u) / max_diff(b.u, c.u);
  EXPECT_NEAR(ratio, 4.0, 0.4);
}

TEST(Solver, SmallAmplitudeLinearization)
{
  // u_ε - ε·u_lin = O(ε^p): halving ε divides the deviation by ~2^p
  auto g = RadialGrid::with_spacing(1.0, 6.0, 1e-2);
  RadialProblem unit = shell_problem(1.0);
  auto lin = advance(initial_state(unit, g), unit, g, 1e-2, 1.0, true);
  auto deviation = [&](double eps) {
    RadialProblem pr = shell_problem(eps);
    auto u = advance(initial_state(pr, g), pr, g, 1e-2, 1.0, false);
    return max_diff(u.u, lin.u, eps);
  };
  double const ratio = deviation(0.02) / deviation(0.01);
  EXPECT_NEAR(ratio, 4.0, 0.1);
}

TEST(Solver, RejectsMismatchedState)
{
  RadialProblem pr = shell_problem(1.0);
  auto g = RadialGrid::with_spacing(1.0, 6.0, 1e-2);
  SolutionState s;
  s.u.assign(3, 0.0);
  s.v.assign(3, 0.0);
  EXPECT_THROW(crank_nicolson_step(s, 1e-2, pr, g), DomainError);
}

TEST(Simulation, BlowsUpAndAmplitudeOrdersTimes)
{
  SolverConfig cfg;
  cfg.h = 1e-2;
  cfg.dt = 1e-2;
  auto r1 = run(shell_problem(1.0), cfg, 30.0);
  auto r2 = run(shell_problem(2.0), cfg, 30.0);
  ASSERT_TRUE(r1.report.blew_up);
  ASSERT_TRUE(r2.report.blew_up);
  EXPECT_LT(r2.report.t_blowup_est, r1.report.t_blowup_est);
  EXPECT_GE(r1.report.t_blowup_est, r1.report.t_end);
  EXPECT_GT(r1.report.t_blowup_est, 5.0);
  EXPECT_LT(r1.report.t_blowup_est, 15.0);
}

TEST(Simulation, Deterministic)
{
  SolverConfig cfg;
  cfg.h = 2e-2;
  cfg.dt = 2e-2;
  auto a = run(shell_problem(1.0), cfg, 3.0);
  auto b = run(shell_problem(1.0), cfg, 3.0);
  EXPECT_EQ(a.trace.F0, b.trace.F0);
  EXPECT_EQ(a.trace.sup_norm, b.trace.sup_norm);
}
