// Command-line front end: one subcommand per component plus the acceptance suite.

#include "dwb/acceptance.hpp"
#include "dwb/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace
{

struct Common
{
  std::string config;
  std::string out = "out";
  bool force = false;
  unsigned jobs = 1;
  std::string profile = "default";
};

void add_common(CLI::App *cmd, Common &c, bool with_config)
{
  if (with_config)
    cmd->add_option("--config", c.config, "key=value plan file (defaults when omitted)")
        ->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
  cmd->add_flag("--force", c.force, "overwrite existing output files");
  cmd->add_option("--jobs", c.jobs, "worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();
  cmd->add_option("--tolerance-profile", c.profile, "default or tight")
      ->check(CLI::IsMember({"default", "tight"}))
      ->capture_default_str();
}

int run_plan_command(Common const &c, dwb::RunKind kind)
{
  using dwb::ExitCode;
  try
  {
    std::string const text = c.config.empty() ? std::string() : dwb::read_file(c.config);
    dwb::ExperimentPlan plan = dwb::parse_config(text, kind);
    if (c.config.empty())
    {
      // No file: one run of this kind with every default.
      plan.runs = dwb::parse_config("kind = " + dwb::to_string(kind) + "\n", kind).runs;
    }
    dwb::RunnerOptions opts;
    opts.out_dir = c.out;
    opts.force = c.force;
    opts.jobs = c.jobs;
    opts.profile = dwb::parse_tolerance_profile(c.profile);
    dwb::PlanOutcome const res = dwb::run_plan(plan, opts);
    for (auto const &run : res.index["runs"])
    {
      std::string line = run["id"].get<std::string>() + ": " + run["status"].get<std::string>();
      if (run.contains("error"))
        line += " (" + run["error"].get<std::string>() + ")";
      else if (run.contains("audits"))
        for (auto const &[name, verdict] : run["audits"].items())
          if (verdict == "fail")
            line += " [" + name + " failed]";
      std::cout << line << "\n";
    }
    std::cout << "index: " << (opts.out_dir / "index.json").string() << "\n";
    return static_cast<int>(res.exit_code);
  }
  catch (dwb::ConfigError const &e)
  {
    std::cerr << "config error: " << e.what() << "\n";
  }
  catch (dwb::OutputExistsError const &e)
  {
    std::cerr << "refusing to overwrite: " << e.what() << "\n";
  }
  catch (std::exception const &e)
  {
    std::cerr << "error: " << e.what() << "\n";
  }
  return static_cast<int>(ExitCode::config_error);
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Blow-up laboratory for u_tt - Δu - Δu_t = |u|^p on radial exterior domains"};
  app.require_subcommand(1);

  Common testfn, estimates, ode, simulate;
  add_common(app.add_subcommand("testfn", "sample φ0, φ1 and their residuals"), testfn, true);
  add_common(app.add_subcommand("estimates", "weighted ψ1 integrals and their decay fits"), estimates, true);
  CLI::App *ode_cmd = app.add_subcommand("ode-scan", "comparison ODE scans (kind ode_scan or ode_threshold)");
  add_common(ode_cmd, ode, true);
  add_common(app.add_subcommand("simulate", "simulate the damped wave equation and audit the run"), simulate,
             true);

  CLI::App *diag = app.add_subcommand("diagnose", "certificate from a trace CSV and run summary");
  std::string trace, summary, diag_out, diag_profile = "default";
  bool diag_force = false;
  diag->add_option("--trace", trace, "trace.csv of a simulate run")->required()->check(CLI::ExistingFile);
  diag->add_option("--summary", summary, "summary.json of the same run")->required()->check(CLI::ExistingFile);
  diag->add_option("--out", diag_out, "certificate JSON path (stdout when omitted)");
  diag->add_flag("--force", diag_force, "overwrite an existing certificate");
  diag->add_option("--tolerance-profile", diag_profile, "default or tight")
      ->check(CLI::IsMember({"default", "tight"}));

  CLI::App *accept = app.add_subcommand("accept", "run the acceptance suite");
  Common acc;
  add_common(accept, acc, false);
  std::vector<int> only;
  double acc_h = 2e-3;
  bool keep = false;
  accept->add_option("--only", only, "criterion ids to run, e.g. 1,3,5")->delimiter(',')->check(CLI::Range(1, 10));
  accept->add_option("--grid-h", acc_h, "grid spacing of the simulation criteria")->capture_default_str();
  accept->add_flag("--keep", keep, "keep simulation artifacts under --out");

  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::ParseError const &e)
  {
    int const code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(dwb::ExitCode::config_error);
  }

  if (app.got_subcommand("testfn"))
    return run_plan_command(testfn, dwb::RunKind::testfn);
  if (app.got_subcommand("estimates"))
    return run_plan_command(estimates, dwb::RunKind::estimates);
  if (app.got_subcommand("ode-scan"))
    return run_plan_command(ode, dwb::RunKind::ode_scan);
  if (app.got_subcommand("simulate"))
    return run_plan_command(simulate, dwb::RunKind::simulate);

  if (app.got_subcommand("diagnose"))
  {
    try
    {
      bool ok = false;
      dwb::Json const cert =
          dwb::diagnose_files(trace, summary, dwb::parse_tolerance_profile(diag_profile), ok);
      std::string const text = cert.dump(2) + "\n";
      if (diag_out.empty())
        std::cout << text;
      else
      {
        if (!diag_force && std::filesystem::exists(diag_out))
          throw dwb::OutputExistsError(diag_out + " exists; pass --force to overwrite");
        dwb::write_atomic(diag_out, text);
      }
      return ok ? 0 : static_cast<int>(dwb::ExitCode::audit_failure);
    }
    catch (std::exception const &e)
    {
      std::cerr << "error: " << e.what() << "\n";
      return static_cast<int>(dwb::ExitCode::config_error);
    }
  }

  dwb::AcceptanceOptions ao;
  ao.profile = dwb::parse_tolerance_profile(acc.profile);
  ao.jobs = acc.jobs;
  ao.force = acc.force;
  ao.h = acc_h;
  ao.only = only;
  if (keep)
    ao.out_dir = acc.out;
  auto const results = dwb::run_acceptance(ao, [](dwb::CriterionResult const &r) {
    std::cout << dwb::format_result(r) << std::endl;
  });
  std::size_t passed = 0;
  for (auto const &r : results)
    passed += r.passed ? 1 : 0;
  std::cout << passed << "/" << results.size() << " criteria passed\n";
  return passed == results.size() ? 0 : static_cast<int>(dwb::ExitCode::audit_failure);
}
