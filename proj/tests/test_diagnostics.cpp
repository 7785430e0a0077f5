#include "dwb/certificate.hpp"
#include "dwb/diagnostics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace dwb;

namespace
{
FunctionalTrace blowup_trace(double T, double p, double noise, unsigned seed)
{
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> jitter(-noise, noise);
  FunctionalTrace tr;
  for (int i = 0; i < 80; ++i)
  {
    TraceRow row;
    row.t = 0.05 * i + 0.5;
    row.sup_norm = std::pow(T - row.t, -2.0 / (p - 1.0)) * (1.0 + jitter(rng));
    tr.push_back(row);
  }
  return tr;
}
} // namespace

TEST(Extrapolation, ExactModel)
{
  auto est = extrapolate_blowup_time(blowup_trace(5.0, 3.0, 0.0, 1), 3.0);
  EXPECT_NEAR(est.t_blowup, 5.0, 1e-9);
}

TEST(Extrapolation, NoisyModel)
{
  for (unsigned seed : {1u, 2u, 3u})
  {
    auto est = extrapolate_blowup_time(blowup_trace(5.0, 3.0, 0.01, seed), 3.0);
    EXPECT_NEAR(est.t_blowup, 5.0, 0.05) << seed;
  }
}

TEST(Extrapolation, RejectsDecayingTrace)
{
  FunctionalTrace tr;
  for (int i = 0; i < 20; ++i)
  {
    TraceRow row;
    row.t = i;
    row.sup_norm = std::exp(-0.1 * i);
    tr.push_back(row);
  }
  EXPECT_THROW(extrapolate_blowup_time(tr, 2.0), DomainError);
}

TEST(Identity, ExactOnQuadratic)
{
  FunctionalTrace tr;
  for (int i = 0; i < 20; ++i)
  {
    TraceRow row;
    row.t = 0.1 * i;
    row.F0 = row.t * row.t;
    row.nonlin_weighted = 2.0;
    tr.push_back(row);
  }
  auto chk = check_f0_identity(tr);
  EXPECT_NEAR(chk.max_abs, 0.0, 1e-11);
}

TEST(Identity, ZeroSolution)
{
  FunctionalTrace tr;
  for (int i = 0; i < 10; ++i)
  {
    TraceRow row;
    row.t = i;
    tr.push_back(row);
  }
  EXPECT_EQ(check_f0_identity(tr).max_abs, 0.0);
}

TEST(Identity, RejectsUnevenCadence)
{
  FunctionalTrace tr;
  for (double t : {0.0, 0.1, 0.2, 0.35, 0.4, 0.5})
  {
    TraceRow row;
    row.t = t;
    tr.push_back(row);
  }
  EXPECT_THROW(check_f0_identity(tr), DomainError);
}

TEST(Lemma9, EndpointsOfBound)
{
  DataIntegrals d{3.0, 1.5};
  EXPECT_DOUBLE_EQ(lemma9_bound(2.0, d, 0.0), 2.0 * 3.0);
  EXPECT_NEAR(lemma9_bound(2.0, d, 1e3), 2.0 / 3.0 * 3.0 + 4.0 / 3.0 * 1.5, 1e-12);
  // d/dt of the bound is ε e^{-3t/2}(∫φ1u1 - ∫φ1u0): nondecreasing iff ∫φ1u1 >= ∫φ1u0
  DataIntegrals up{1.0, 1.2};
  double prev = lemma9_bound(1.0, up, 0.0);
  for (double t = 0.1; t < 10; t += 0.1)
  {
    double const b = lemma9_bound(1.0, up, t);
    ASSERT_GE(b, prev);
    prev = b;
  }
  // 2∫φ1u1 = ∫φ1u0 alone is not enough
  EXPECT_LT(lemma9_bound(1.0, d, 1.0), lemma9_bound(1.0, d, 0.0));
}

TEST(Functionals, ZeroAndSelfConsistent)
{
  Dimension d = Dimension::exterior_ball(3, 1.0);
  auto g = RadialGrid::with_spacing(1.0, 10.0, 1e-2);
  auto tf = make_test_functions(d, g);
  SolutionState s;
  s.u.assign(g.size(), 0.0);
  s.v = s.u;
  auto zero = compute_functionals(s, tf, 2.0);
  EXPECT_EQ(zero.F0, 0.0);
  EXPECT_EQ(zero.F1, 0.0);
  EXPECT_EQ(zero.nonlin_weighted, 0.0);

  s.u = tf.phi0;
  std::vector<double> sq(g.size());
  for (std::size_t i = 0; i < sq.size(); ++i)
    sq[i] = tf.phi0[i] * tf.phi0[i];
  auto row = compute_functionals(s, tf, 2.0);
  EXPECT_NEAR(row.F0 / radial_quadrature(g, sq, 3), 1.0, 1e-12);
}

TEST(Functionals, InitialF1MatchesData)
{
  RadialProblem pr;
  pr.eps = 0.7;
  Dimension const &d = pr.dim;
  auto g = RadialGrid::with_spacing(1.0, 10.0, 1e-2);
  auto tf = make_test_functions(d, g);
  auto row = compute_functionals(initial_state(pr, g), tf, pr.p);
  auto di = data_integrals(pr, tf);
  EXPECT_NEAR(row.F1 / (pr.eps * di.phi1_u0), 1.0, 1e-12);
  EXPECT_NEAR(lemma9_bound(pr, tf, 0.0), row.F1, 1e-12 * row.F1);
}

TEST(Inequality, ConstantsAndTargets)
{
  EXPECT_NEAR(inequality_constant(Dimension::exterior_ball(3, 1.0), 2.0), 0.238732, 1e-6);
  EXPECT_DOUBLE_EQ(f0_target_exponent(3, 2.0), 2.0);
  EXPECT_DOUBLE_EQ(f0_target_exponent(1, 2.0), 2.0);
  EXPECT_NEAR(f0_target_exponent(2, strauss_exponent(2)), 1.2192, 1e-4);
  EXPECT_THROW(inequality_constant(Dimension::exterior_ball(2, 0.5), 2.0), DomainError);
}

TEST(Windows, PreBlowupRows)
{
  auto tr = blowup_trace(5.0, 3.0, 0.0, 1);
  std::size_t const k = pre_blowup_rows(tr, 2.0);
  ASSERT_GT(k, 0u);
  ASSERT_LT(k, tr.size());
  EXPECT_LE(tr.sup_norm[k - 1], 2.0 * tr.sup_norm[0]);
  EXPECT_GT(tr.sup_norm[k], 2.0 * tr.sup_norm[0]);
}

TEST(Certificate, CoarseRunInvariants)
{
  RadialProblem pr;
  SolverConfig cfg;
  cfg.h = 1e-2;
  cfg.dt = 1e-2;
  auto g = grid_for(pr, cfg, 30.0);
  auto tf = make_test_functions(pr.dim, g);
  auto res = run(pr, cfg, 30.0, tf);
  auto cert = certify_run(res.trace, res.report, pr, tf);
  EXPECT_TRUE(cert.blew_up);
  EXPECT_TRUE(cert.lemma9_ok);
  EXPECT_TRUE(cert.identity_ok);
  EXPECT_TRUE(cert.inequality_ok);
  ASSERT_TRUE(cert.ode.has_value());
  EXPECT_TRUE(cert.ode->report.blew_up);
  EXPECT_EQ(cert.ode->spec.q, 3.0);
}
