#include "dwb/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dwb
{

void SolverConfig::validate() const
{
  if (!(h > 0.0))
    throw DomainError("h must be positive");
  if (!(dt > 0.0))
    throw DomainError("dt must be positive");
  if (!(dt_min > 0.0) || dt_min > dt)
    throw DomainError("dt_min must be positive and at most dt");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
    throw DomainError("cfl_safety must lie in (0, 1]");
  if (!(growth_limit > 1.0))
    throw DomainError("growth_limit must exceed 1");
  if (!(output_interval > 0.0))
    throw DomainError("output_interval must be positive");
  if (!(rmax_margin >= 0.0))
    throw DomainError("rmax_margin must be nonnegative");
}

std::vector<double> discrete_laplacian(std::span<double const> u, Dimension const &dim,
                                       RadialGrid const &grid)
{
  std::vector<double> out(u.size());
  apply_radial_laplacian(grid, dim.n(), u, out);
  return out;
}

RadialGrid grid_for(RadialProblem const &problem, SolverConfig const &cfg, double t_end)
{
  return RadialGrid::with_spacing(problem.dim.r0(),
                                  problem.R + t_end + 2.0 * cfg.h + cfg.rmax_margin, cfg.h);
}

SolutionState initial_state(RadialProblem const &problem, RadialGrid const &grid)
{
  SolutionState s;
  s.u.assign(grid.size(), 0.0);
  s.v.assign(grid.size(), 0.0);
  for (std::size_t i = 1; i + 1 < grid.size(); ++i)
  {
    double const r = grid.node(i);
    s.u[i] = problem.eps * problem.u0(r);
    s.v[i] = problem.eps * problem.u1(r);
  }
  return s;
}

void CnWorkspace::prepare(RadialGrid const &grid, int n, double dt)
{
  std::size_t const m = grid.size();
  bool const same_grid = m == m_ && n == n_ && grid.node(0) == r0_ && grid.h() == h_;
  if (same_grid && dt == dt_)
    return;
  double const h = grid.h();
  double const inv_h2 = 1.0 / (h * h);
  if (!same_grid)
  {
    m_ = m;
    n_ = n;
    r0_ = grid.node(0);
    h_ = h;
    west_.assign(m, 0.0);
    east_.assign(m, 0.0);
    for (std::size_t i = 1; i + 1 < m; ++i)
    {
      double const drift = n == 1 ? 0.0 : (n - 1) / (2.0 * grid.node(i) * h);
      west_[i] = inv_h2 - drift;
      east_[i] = inv_h2 + drift;
    }
    rhs_.assign(m, 0.0);
  }
  dt_ = dt;
  double const alpha = 0.5 * dt + 0.25 * dt * dt;
  double const d0 = 1.0 + 2.0 * alpha * inv_h2;
  // Forward elimination of (I - αΔ) on the interior nodes 1..m-2.
  upper_.assign(m, 0.0);
  inv_pivot_.assign(m, 0.0);
  factor_.assign(m, 0.0);
  double pivot = d0;
  inv_pivot_[1] = 1.0 / pivot;
  upper_[1] = -alpha * east_[1];
  for (std::size_t i = 2; i + 1 < m; ++i)
  {
    double const lower = -alpha * west_[i];
    factor_[i] = lower * inv_pivot_[i - 1];
    pivot = d0 - factor_[i] * upper_[i - 1];
    inv_pivot_[i] = 1.0 / pivot;
    upper_[i] = -alpha * east_[i];
  }
}

SolutionState crank_nicolson_step(SolutionState const &state, double dt, RadialProblem const &problem,
                                  RadialGrid const &grid, bool linear_only, CnWorkspace *ws)
{
  CnWorkspace local;
  CnWorkspace &w = ws ? *ws : local;
  std::size_t const m = grid.size();
  if (state.u.size() != m || state.v.size() != m)
    throw DomainError("state does not match the grid");
  w.prepare(grid, problem.dim.n(), dt);
  double const alpha = 0.5 * dt + 0.25 * dt * dt;
  double const p = problem.p;
  double const *u = state.u.data();
  double const *v = state.v.data();
  double *rhs = w.rhs_.data();

  // (I - αΔ) v⁺ = v + dt Δu + αΔv + dt |u + (dt/2) v|^p on interior nodes,
  // eliminated on the fly with the cached factors.
  for (std::size_t i = 1; i + 1 < m; ++i)
  {
    double const we = w.west_[i], ea = w.east_[i];
    double const c = we + ea;
    double const lap_u = we * u[i - 1] - c * u[i] + ea * u[i + 1];
    double const lap_v = we * v[i - 1] - c * v[i] + ea * v[i + 1];
    double const source = linear_only ? 0.0 : abs_pow(u[i] + 0.5 * dt * v[i], p);
    double r = v[i] + dt * lap_u + alpha * lap_v + dt * source;
    if (i > 1)
      r -= w.factor_[i] * rhs[i - 1];
    rhs[i] = r;
  }

  SolutionState next;
  next.t = state.t + dt;
  next.v.assign(m, 0.0);
  next.u.assign(m, 0.0);
  double *vn = next.v.data();
  if (m > 2)
    vn[m - 2] = rhs[m - 2] * w.inv_pivot_[m - 2];
  for (std::size_t i = m - 2; i-- > 1;)
    vn[i] = (rhs[i] - w.upper_[i] * vn[i + 1]) * w.inv_pivot_[i];

  bool finite = true;
  for (std::size_t i = 1; i + 1 < m; ++i)
  {
    next.u[i] = u[i] + 0.5 * dt * (v[i] + vn[i]);
    finite = finite && std::isfinite(next.u[i]) && std::isfinite(vn[i]);
  }
  if (!finite)
    throw std::runtime_error("non-finite value in linear solve at t = " + std::to_string(next.t));
  return next;
}

double sup_norm(std::span<double const> u)
{
  double s = 0.0;
  for (double x : u)
    s = std::max(s, std::abs(x));
  return s;
}

StepResult step(SolutionState const &state, double dt_try, SolverConfig const &cfg,
                RadialProblem const &problem, RadialGrid const &grid, CnWorkspace *ws)
{
  double const s0 = sup_norm(state.u);
  double dt = dt_try;
  if (!cfg.linear_only && s0 > 0.0)
    dt = std::min(dt, cfg.cfl_safety / (problem.p * std::pow(s0, problem.p - 1.0)));
  dt = std::max(dt, cfg.dt_min);

  StepResult out;
  for (;;)
  {
    SolutionState next = crank_nicolson_step(state, dt, problem, grid, cfg.linear_only, ws);
    double const s1 = sup_norm(next.u);
    bool const too_fast = s0 > 0.0 && s1 > cfg.growth_limit * s0;
    if (!too_fast)
    {
      out.state = std::move(next);
      out.dt_used = dt;
      out.sup_after = s1;
      return out;
    }
    if (dt * 0.5 < cfg.dt_min)
    {
      out.state = std::move(next);
      out.dt_used = dt;
      out.sup_after = s1;
      out.hit_dt_min = true;
      return out;
    }
    dt *= 0.5;
    ++out.rejections;
  }
}

double linear_energy(SolutionState const &state, RadialGrid const &grid, int n)
{
  std::size_t const m = grid.size();
  double const h = grid.h();
  std::vector<double> v2(m);
  for (std::size_t i = 0; i < m; ++i)
    v2[i] = state.v[i] * state.v[i];
  double kinetic = radial_quadrature(grid, v2, n);
  double grad = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i)
  {
    double const du = (state.u[i + 1] - state.u[i]) / h;
    grad += radial_weight(n, grid.node(i) + 0.5 * h) * du * du * h;
  }
  return 0.5 * (kinetic + grad);
}

double support_tail_ratio(SolutionState const &state, RadialProblem const &problem,
                          RadialGrid const &grid)
{
  double const s = sup_norm(state.u);
  if (s == 0.0)
    return 0.0;
  double const edge = state.t + problem.R + 2.0 * grid.h();
  double tail = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid.node(i) >= edge)
      tail = std::max(tail, std::abs(state.u[i]));
  return tail / s;
}

} // namespace dwb
