#pragma once

// The ten acceptance criteria, each reduced to a pass/fail line with the
// measured numbers attached.

#include "dwb/runner.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dwb
{

struct CriterionResult
{
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
};

struct AcceptanceOptions
{
  ToleranceProfile profile = ToleranceProfile::standard;
  unsigned jobs = 1;
  /// Artifacts of the simulation plans go here; a temporary directory when unset.
  std::optional<std::filesystem::path> out_dir;
  bool force = false;
  /// Grid spacing of the simulation criteria (7-10).
  double h = 2e-3;
  double dt = 1e-2;
  /// Restrict to these criterion ids (all when empty).
  std::vector<int> only;
};

/// "[PASS] 3 ODE blow-up oracle: ..." style line.
std::string format_result(CriterionResult const &r);

/// Runs the suite; `on_result` sees each line as soon as it is decided.
std::vector<CriterionResult> run_acceptance(AcceptanceOptions const &opts,
                                            std::function<void(CriterionResult const &)> const &on_result = {});

} // namespace dwb
