#pragma once

// Plain-text experiment plans.
//
//   # comment
//   name = sweep          (plan name, top level only)
//   n = 3                 (top-level keys are defaults for every run)
//   [base]                (one run, or several when a sweep key lists values)
//   kind = simulate
//   p = 1.5, 2, 2.3
//   eps = 0.5, 1, 2
//
// Without any [section] the top-level keys describe a single run named
// "run". Unknown keys, malformed values and invariant violations are
// errors that name the key and line.

#include "dwb/certificate.hpp"
#include "dwb/ode_blowup.hpp"
#include "dwb/radial.hpp"
#include "dwb/solver.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace dwb
{

class ConfigError : public std::runtime_error
{
public:
  ConfigError(std::size_t line, std::string key, std::string const &message);
  std::size_t line() const { return line_; }
  std::string const &key() const { return key_; }

private:
  std::size_t line_;
  std::string key_;
};

enum class RunKind
{
  simulate,
  ode_scan,
  ode_threshold,
  testfn,
  estimates
};

std::string to_string(RunKind k);
RunKind parse_run_kind(std::string const &name);

struct SimulateRun
{
  RadialProblem problem;
  SolverConfig solver;
  double t_end = 200.0;
  CertificateOptions certificate;
};

struct OdeScanRun
{
  std::vector<double> a{1.0, 1.5, 2.0, 2.5, 3.0};
  std::vector<double> q{0.0, 0.5, 1.0, 1.5, 2.0};
  std::vector<double> p{1.5, 2.0, 2.5, 3.0, 4.0};
  GridScanOptions grid;
};

struct OdeThresholdRun
{
  OdeBlowupSpec spec;
  std::vector<double> k0;
  double horizon = 1e6;
};

struct TestFnRun
{
  Dimension dim = Dimension::exterior_ball(3, 1.0);
  double h = 1e-3;
  double rmax = 40.0;
};

struct EstimatesRun
{
  Dimension dim = Dimension::exterior_ball(3, 1.0);
  double p = 2.0;
  double R = 3.0;
  double h = 1e-3;
  double t_min = 10.0;
  double t_max = 100.0;
  std::size_t samples = 16;
};

struct RunSpec
{
  std::string id;
  RunKind kind = RunKind::simulate;
  std::variant<SimulateRun, OdeScanRun, OdeThresholdRun, TestFnRun, EstimatesRun> body;
};

struct ExperimentPlan
{
  std::string name = "plan";
  std::vector<RunSpec> runs;
};

/// Parses a plan. Sections without a `kind` key get `default_kind`.
ExperimentPlan parse_config(std::string_view text, RunKind default_kind = RunKind::simulate);

/// Every parameter of a run, defaults included, as ordered key/value text.
std::vector<std::pair<std::string, std::string>> resolved_config(RunSpec const &run);

/// Shortest round-trip decimal form of x ("inf", "-inf", "nan" for non-finite values).
std::string format_double(double x);

} // namespace dwb
