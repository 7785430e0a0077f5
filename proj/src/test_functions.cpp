#include "dwb/test_functions.hpp"

#include "dwb/embedded_rk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dwb
{

namespace
{

void require_boundary_start(Dimension const &dim, RadialGrid const &grid)
{
  double const tol = 1e-12 * std::max(1.0, dim.r0());
  if (std::abs(grid.r0() - dim.r0()) > tol)
    throw DomainError("grid must start at the obstacle boundary r0 = " + std::to_string(dim.r0()));
}

constexpr double rescale_above = 1e200;

// φ'' = φ/2 - ((n-1)/r) φ' as a first-order system.
struct EigenRhs
{
  int n;
  std::array<double, 2> operator()(double r, std::array<double, 2> const &y) const
  {
    double const friction = n == 1 ? 0.0 : (n - 1) / r * y[1];
    return {y[1], 0.5 * y[0] - friction};
  }
};

} // namespace

double phi0_value(Dimension const &dim, double r)
{
  int const n = dim.n();
  if (n == 1)
    return r;
  if (n == 2)
    return std::log(r / dim.r0());
  return 1.0 - std::pow(dim.r0() / r, n - 2);
}

std::vector<double> build_phi0(Dimension const &dim, RadialGrid const &grid)
{
  require_boundary_start(dim, grid);
  std::vector<double> phi(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    phi[i] = phi0_value(dim, grid.node(i));
  phi[0] = 0.0;
  return phi;
}

Phi1Samples build_phi1_samples(Dimension const &dim, RadialGrid const &grid)
{
  require_boundary_start(dim, grid);
  EigenRhs const rhs{dim.n()};

  RkOptions opts;
  opts.rtol = 1e-10;
  opts.atol = 1e-16;
  opts.h_init = std::min(1e-3, 0.5 * grid.h());

  std::size_t const m = grid.size();
  Phi1Samples out;
  out.phi1.assign(m, 0.0);
  out.log_phi1.assign(m, -std::numeric_limits<double>::infinity());
  out.dphi1.assign(m, 1.0);

  double log_offset = 0.0;
  auto stepper = make_rk45<2>(rhs, grid.r0(), {0.0, 1.0}, opts);
  for (std::size_t i = 1; i < m; ++i)
  {
    RkStatus const st = stepper.advance_to(grid.node(i));
    if (st != RkStatus::ok)
      throw std::runtime_error("phi1 integration failed at r = " + std::to_string(grid.node(i)));
    auto y = stepper.y();
    if (!(y[0] > 0.0))
      throw std::runtime_error("phi1 lost positivity at r = " + std::to_string(grid.node(i)));
    out.log_phi1[i] = std::log(y[0]) + log_offset;
    out.phi1[i] = std::exp(out.log_phi1[i]);
    out.dphi1[i] = y[1] * std::exp(log_offset);
    if (y[0] > rescale_above)
    {
      double const hint = stepper.suggested_step();
      log_offset += std::log(rescale_above);
      y[0] /= rescale_above;
      y[1] /= rescale_above;
      RkOptions again = opts;
      again.h_init = hint;
      stepper = make_rk45<2>(rhs, grid.node(i), y, again);
    }
  }
  return out;
}

std::vector<double> build_phi1(Dimension const &dim, RadialGrid const &grid)
{
  return build_phi1_samples(dim, grid).phi1;
}

TestFunctionSet make_test_functions(Dimension const &dim, RadialGrid const &grid)
{
  Phi1Samples s = build_phi1_samples(dim, grid);
  return TestFunctionSet{dim, grid, build_phi0(dim, grid), std::move(s.phi1),
                         std::move(s.log_phi1), std::move(s.dphi1)};
}

std::vector<double> psi1_at(TestFunctionSet const &tf, double t)
{
  if (!(t >= 0.0))
    throw DomainError("psi1_at requires t >= 0");
  std::vector<double> psi(tf.log_phi1.size());
  for (std::size_t i = 0; i < psi.size(); ++i)
    psi[i] = std::exp(tf.log_phi1[i] - t);
  return psi;
}

std::vector<double> log_psi1_at(TestFunctionSet const &tf, double t)
{
  std::vector<double> out(tf.log_phi1);
  for (double &v : out)
    v -= t;
  return out;
}

double residual_harmonic(TestFunctionSet const &tf)
{
  std::vector<double> lap(tf.phi0.size());
  apply_radial_laplacian(tf.grid, tf.dim.n(), tf.phi0, lap);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < lap.size(); ++i)
    worst = std::max(worst, std::abs(lap[i]));
  return worst;
}

double residual_eigen(TestFunctionSet const &tf)
{
  // Evaluated on node-local rescalings φ_j / φ_i so that huge φ1 never overflows.
  RadialGrid const &g = tf.grid;
  int const n = tf.dim.n();
  double const h = g.h();
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < g.size(); ++i)
  {
    double const c = tf.log_phi1[i];
    double const left = i == 1 ? 0.0 : std::exp(tf.log_phi1[i - 1] - c);
    double const right = std::exp(tf.log_phi1[i + 1] - c);
    double const urr = (right - 2.0 + left) / (h * h);
    double const ur = (right - left) / (2.0 * h);
    double const lap = n == 1 ? urr : urr + (n - 1) / g.node(i) * ur;
    worst = std::max(worst, std::abs(lap - 0.5));
  }
  return worst;
}

double phi1_growth_rate(TestFunctionSet const &tf)
{
  std::size_t const m = tf.grid.size();
  std::size_t const first = m / 2;
  std::vector<double> x, y;
  x.reserve(m - first);
  y.reserve(m - first);
  int const n = tf.dim.n();
  for (std::size_t i = std::max<std::size_t>(first, 1); i < m; ++i)
  {
    double const r = tf.grid.node(i);
    x.push_back(r);
    y.push_back(tf.log_phi1[i] + 0.5 * (n - 1) * std::log(r));
  }
  return fit_line(x, y).slope;
}

} // namespace dwb
