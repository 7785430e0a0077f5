#pragma once

// Executes experiment plans and lays out their artifacts:
//   <out>/<run id>/<data>.csv      one-line header after '#' config lines
//   <out>/<run id>/summary.json    config, results and audit verdicts
//   <out>/index.json               every run with its status and files

#include "dwb/certificate.hpp"
#include "dwb/config.hpp"
#include "dwb/io.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace dwb
{

using Json = nlohmann::ordered_json;

enum class ToleranceProfile
{
  standard,
  tight
};

/// "default" or "tight".
ToleranceProfile parse_tolerance_profile(std::string const &name);
std::string to_string(ToleranceProfile p);
OdeTolerances ode_tolerances(ToleranceProfile p);

enum class ExitCode : int
{
  success = 0,
  audit_failure = 1,
  config_error = 2
};

/// Refusal to replace existing output without --force.
class OutputExistsError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct RunnerOptions
{
  std::filesystem::path out_dir = "out";
  bool force = false;
  unsigned jobs = 1;
  ToleranceProfile profile = ToleranceProfile::standard;
};

struct OutputFile
{
  std::string name;
  std::string contents;
};

/// Result of one run before anything touches the disk.
struct RunArtifacts
{
  std::vector<OutputFile> files;
  Json summary;
  /// "ok", "audit_failed" or "error".
  std::string status = "ok";
};

/// Runs one spec in memory. Failures become status "error" with the message
/// in summary["error"]; nothing is thrown for run-level problems.
RunArtifacts execute_run(RunSpec const &run, ToleranceProfile profile, unsigned jobs = 1);

struct PlanOutcome
{
  ExitCode exit_code = ExitCode::success;
  Json index;
};

/// Executes every run (up to opts.jobs at a time) and writes all files.
/// Throws OutputExistsError before running anything when a target exists
/// and opts.force is false.
PlanOutcome run_plan(ExperimentPlan const &plan, RunnerOptions const &opts);

/// The file names execute_run produces for a run kind.
std::vector<std::string> output_names(RunKind kind);

Json certificate_json(RunCertificate const &c);

/// Re-derives a certificate from a simulate run's trace CSV and summary JSON.
Json diagnose_files(std::filesystem::path const &trace_csv, std::filesystem::path const &summary_json,
                    ToleranceProfile profile, bool &audits_ok);

/// Reads a trace CSV written for a simulate run.
FunctionalTrace read_trace_csv(std::string const &text);

} // namespace dwb
