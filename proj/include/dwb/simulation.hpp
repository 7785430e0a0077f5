#pragma once

#include "dwb/diagnostics.hpp"
#include "dwb/solver.hpp"
#include "dwb/test_functions.hpp"

#include <cstddef>
#include <string>

namespace dwb
{

struct SimulationReport
{
  bool blew_up = false;
  /// Why the run stopped: "horizon", "threshold", "dt_min" or "non_finite".
  std::string stop_reason;
  double t_end = 0.0;
  double t_blowup_est = 0.0;
  double t_blowup_half_width = 0.0;
  /// "trace_fit" or "tangent" (final-state tangent of ‖u‖_∞^{-(p-1)/2}).
  std::string estimate_method;
  double final_sup_norm = 0.0;
  std::size_t steps = 0;
  std::size_t rejections = 0;
  /// Largest support_tail_ratio seen at output times.
  double max_tail_ratio = 0.0;
  double tail_tolerance = 1e-10;
  bool support_ok = true;
  /// Number of grid nodes.
  std::size_t grid_nodes = 0;
  double rmax = 0.0;
};

struct SimulationResult
{
  RadialGrid grid;
  FunctionalTrace trace;
  SimulationReport report;
  SolutionState final_state;
};

/// Steps until t_end, the blow-up threshold, or sustained growth at dt_min.
/// Functionals are recorded at multiples of cfg.output_interval.
SimulationResult run(RadialProblem const &problem, SolverConfig const &cfg, double t_end);

/// As above with test functions already built on grid_for(problem, cfg, t_end).
SimulationResult run(RadialProblem const &problem, SolverConfig const &cfg, double t_end,
                     TestFunctionSet const &tf);

} // namespace dwb
