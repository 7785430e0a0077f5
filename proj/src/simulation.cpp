#include "dwb/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#if defined(__SSE2__)
#include <pmmintrin.h>
#include <xmmintrin.h>
#endif

namespace dwb
{

namespace
{

// The far field underflows toward zero and denormal arithmetic there dominates
// the step cost. Flush them for the duration of a run.
class DenormalFlush
{
public:
  DenormalFlush()
  {
#if defined(__SSE2__)
    saved_ = _mm_getcsr();
    _MM_SET_FLUSH_ZERO_MODE(_MM_FLUSH_ZERO_ON);
    _MM_SET_DENORMALS_ZERO_MODE(_MM_DENORMALS_ZERO_ON);
#endif
  }
  ~DenormalFlush()
  {
#if defined(__SSE2__)
    _mm_setcsr(saved_);
#endif
  }
  DenormalFlush(DenormalFlush const &) = delete;
  DenormalFlush &operator=(DenormalFlush const &) = delete;

private:
  unsigned saved_ = 0;
};

} // namespace

SimulationResult run(RadialProblem const &problem, SolverConfig const &cfg, double t_end)
{
  problem.validate();
  cfg.validate();
  RadialGrid const grid = grid_for(problem, cfg, t_end);
  TestFunctionSet const tf = make_test_functions(problem.dim, grid);
  return run(problem, cfg, t_end, tf);
}

SimulationResult run(RadialProblem const &problem, SolverConfig const &cfg, double t_end,
                     TestFunctionSet const &tf)
{
  problem.validate();
  cfg.validate();
  if (!(t_end > 0.0))
    throw DomainError("t_end must be positive");
  RadialGrid const &grid = tf.grid;
  if (grid.rmax() + 1e-9 < problem.R + t_end + 2.0 * grid.h())
    throw DomainError("grid too short: rmax must be >= R + t_end + 2h");

  DenormalFlush const flush;
  SimulationResult res{grid, {}, {}, initial_state(problem, grid)};
  SimulationReport &rep = res.report;
  rep.grid_nodes = grid.size();
  rep.rmax = grid.rmax();

  SolutionState state = res.final_state;
  auto record = [&](SolutionState const &s) {
    TraceRow row = compute_functionals(s, tf, problem.p);
    row.tail_ratio = support_tail_ratio(s, problem, grid);
    rep.max_tail_ratio = std::max(rep.max_tail_ratio, row.tail_ratio);
    res.trace.push_back(row);
  };
  record(state);

  CnWorkspace workspace;
  double const every = cfg.output_interval;
  std::size_t next_row = 1;
  double prev_t = state.t;
  double prev_sup = sup_norm(state.u);
  double cur_sup = prev_sup;
  rep.stop_reason = "horizon";

  while (state.t < t_end)
  {
    double const target = std::min(static_cast<double>(next_row) * every, t_end);
    double const dt_try = std::min(cfg.dt, target - state.t);
    StepResult sr;
    try
    {
      sr = step(state, dt_try, cfg, problem, grid, &workspace);
    }
    catch (std::runtime_error const &)
    {
      rep.blew_up = true;
      rep.stop_reason = "non_finite";
      break;
    }
    ++rep.steps;
    rep.rejections += sr.rejections;
    prev_t = state.t;
    prev_sup = cur_sup;
    state = std::move(sr.state);
    cur_sup = sr.sup_after;
    if (std::abs(state.t - target) <= 1e-9 * every)
    {
      state.t = target;
      if (target == static_cast<double>(next_row) * every)
      {
        record(state);
        ++next_row;
      }
    }
    if (cur_sup > cfg.blowup_threshold)
    {
      rep.blew_up = true;
      rep.stop_reason = "threshold";
      break;
    }
    if (sr.hit_dt_min)
    {
      rep.blew_up = true;
      rep.stop_reason = "dt_min";
      break;
    }
  }

  rep.t_end = state.t;
  rep.final_sup_norm = sup_norm(state.u);
  rep.support_ok = rep.max_tail_ratio < rep.tail_tolerance;

  if (rep.blew_up)
  {
    try
    {
      BlowupEstimate const est = extrapolate_blowup_time(res.trace, problem.p);
      rep.t_blowup_est = std::max(est.t_blowup, rep.t_end);
      rep.t_blowup_half_width = est.half_width;
      rep.estimate_method = "trace_fit";
    }
    catch (DomainError const &)
    {
      // Tangent of S^{-(p-1)/2} through the last two states.
      double const e = -0.5 * (problem.p - 1.0);
      double const y0 = std::pow(prev_sup, e);
      double const y1 = std::pow(rep.final_sup_norm, e);
      double const slope = (y1 - y0) / (state.t - prev_t);
      rep.t_blowup_est = slope < 0.0 ? state.t - y1 / slope : state.t;
      rep.estimate_method = "tangent";
    }
  }
  res.final_state = std::move(state);
  return res;
}

} // namespace dwb
