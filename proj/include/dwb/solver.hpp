#pragma once

// Method-of-lines solver for u_tt - Δu - Δu_t = |u|^p on a radial grid with
// u = 0 on the obstacle boundary and at the truncation radius.
//
// First-order system u_t = v, v_t = Δu + Δv + |u|^p. Both linear operators
// are trapezoidal in time; the source is explicit at the predicted midpoint
// u + (dt/2) v, so every step is second order and needs one tridiagonal solve.

#include "dwb/radial.hpp"

#include <span>
#include <vector>

namespace dwb
{

struct SolutionState
{
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> v;
};

struct SolverConfig
{
  /// Grid spacing.
  double h = 2e-3;
  /// Largest internal time step.
  double dt = 5e-3;
  /// Caps dt at cfl_safety / (p ‖u‖_∞^{p-1}), the explicit source's time scale.
  double cfl_safety = 0.5;
  double blowup_threshold = 1e6;
  double dt_min = 1e-9;
  /// A step whose sup-norm grows by more than this factor is retried with dt/2.
  double growth_limit = 1.05;
  /// Cadence of recorded functionals.
  double output_interval = 0.05;
  /// Extra room beyond R + t_end + 2h when sizing the grid.
  double rmax_margin = 0.0;
  /// Drop |u|^p (linear audits).
  bool linear_only = false;

  void validate() const;
};

std::vector<double> discrete_laplacian(std::span<double const> u, Dimension const &dim,
                                       RadialGrid const &grid);

/// Grid sized so rmax >= R + t_end + 2h (+ margin).
RadialGrid grid_for(RadialProblem const &problem, SolverConfig const &cfg, double t_end);

/// ε·(u0, u1) sampled on the grid, zero on both boundary nodes.
SolutionState initial_state(RadialProblem const &problem, RadialGrid const &grid);

/// Reusable buffers for crank_nicolson_step. The factored matrix is kept
/// while dt and the grid stay the same, which is most steps of a run.
class CnWorkspace
{
public:
  CnWorkspace() = default;

private:
  friend SolutionState crank_nicolson_step(SolutionState const &, double, RadialProblem const &,
                                           RadialGrid const &, bool, CnWorkspace *);
  void prepare(RadialGrid const &grid, int n, double dt);

  std::size_t m_ = 0;
  int n_ = 0;
  double r0_ = 0.0;
  double h_ = 0.0;
  double dt_ = -1.0;
  std::vector<double> west_, east_;   // Laplacian stencil weights
  std::vector<double> upper_, inv_pivot_, factor_;
  std::vector<double> rhs_;
};

/// One trapezoidal step of size dt (no step-size control).
SolutionState crank_nicolson_step(SolutionState const &state, double dt, RadialProblem const &problem,
                                  RadialGrid const &grid, bool linear_only = false,
                                  CnWorkspace *ws = nullptr);

struct StepResult
{
  SolutionState state;
  double dt_used = 0.0;
  /// Growth persisted down to dt_min; the returned state is the dt_min step.
  bool hit_dt_min = false;
  std::size_t rejections = 0;
  /// ‖u‖_∞ of the returned state.
  double sup_after = 0.0;
};

/// Attempts dt_try, halving while ‖u‖_∞ grows by more than cfg.growth_limit.
StepResult step(SolutionState const &state, double dt_try, SolverConfig const &cfg,
                RadialProblem const &problem, RadialGrid const &grid, CnWorkspace *ws = nullptr);

double sup_norm(std::span<double const> u);

/// ½∫(v² + |u_r|²) dx with cell-centred gradients.
double linear_energy(SolutionState const &state, RadialGrid const &grid, int n);

/// max |u| over nodes with r >= t + R + 2h, divided by ‖u‖_∞ (0 when u ≡ 0).
double support_tail_ratio(SolutionState const &state, RadialProblem const &problem,
                          RadialGrid const &grid);

} // namespace dwb
