#include "dwb/runner.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace dwb;
namespace fs = std::filesystem;

namespace
{
fs::path fresh_dir(std::string const &name)
{
  fs::path d = fs::temp_directory_path() / ("dwb_runner_" + name);
  fs::remove_all(d);
  return d;
}

int cli(std::string const &args)
{
  std::string const cmd = std::string(DWB_CLI) + " " + args + " >/dev/null 2>&1";
  int const status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentPlan small_plan()
{
  return parse_config("[tf]\nkind = testfn\nn = 3\nh = 1e-2\nrmax = 10\n"
                      "[sim]\nkind = simulate\nn = 3\nh = 2e-2\ndt = 2e-2\nt_end = 1\n");
}
} // namespace

TEST(Runner, WritesIndexAndFiles)
{
  RunnerOptions o;
  o.out_dir = fresh_dir("files");
  auto res = run_plan(small_plan(), o);
  ASSERT_TRUE(fs::exists(o.out_dir / "index.json"));
  ASSERT_EQ(res.index["runs"].size(), 2u);
  EXPECT_TRUE(fs::exists(o.out_dir / "tf" / "samples.csv"));
  EXPECT_TRUE(fs::exists(o.out_dir / "sim" / "trace.csv"));
  EXPECT_TRUE(fs::exists(o.out_dir / "sim" / "summary.json"));
  std::string const csv = read_file(o.out_dir / "sim" / "trace.csv");
  auto pos = csv.find("\nt,");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_EQ(csv.substr(pos + 1, csv.find('\n', pos + 1) - pos - 1),
            "t,F0,F1,sup_norm,l2_norm,nonlin_weighted,tail_ratio,lemma9_bound");
  fs::remove_all(o.out_dir);
}

TEST(Runner, EmptyPlanSucceeds)
{
  RunnerOptions o;
  o.out_dir = fresh_dir("empty");
  auto res = run_plan(ExperimentPlan{}, o);
  EXPECT_EQ(res.exit_code, ExitCode::success);
  EXPECT_TRUE(res.index["runs"].empty());
  fs::remove_all(o.out_dir);
}

TEST(Runner, RefusesOverwriteWithoutForce)
{
  RunnerOptions o;
  o.out_dir = fresh_dir("force");
  run_plan(small_plan(), o);
  std::string const before = read_file(o.out_dir / "tf" / "samples.csv");
  EXPECT_THROW(run_plan(small_plan(), o), OutputExistsError);
  EXPECT_EQ(read_file(o.out_dir / "tf" / "samples.csv"), before);
  o.force = true;
  EXPECT_NO_THROW(run_plan(small_plan(), o));
  fs::remove_all(o.out_dir);
}

TEST(Runner, DeterministicAcrossJobCounts)
{
  RunnerOptions a, b;
  a.out_dir = fresh_dir("det_a");
  b.out_dir = fresh_dir("det_b");
  b.jobs = 4;
  run_plan(small_plan(), a);
  run_plan(small_plan(), b);
  for (char const *f : {"tf/samples.csv", "tf/summary.json", "sim/trace.csv", "sim/summary.json"})
    EXPECT_EQ(read_file(a.out_dir / f), read_file(b.out_dir / f)) << f;
  fs::remove_all(a.out_dir);
  fs::remove_all(b.out_dir);
}

TEST(Runner, TraceCsvRoundTrip)
{
  auto plan = parse_config("kind = simulate\nh = 2e-2\ndt = 2e-2\nt_end = 1\n");
  auto art = execute_run(plan.runs[0], ToleranceProfile::standard);
  ASSERT_EQ(art.files.front().name, "trace.csv");
  auto tr = read_trace_csv(art.files.front().contents);
  EXPECT_EQ(tr.size(), 21u);
  EXPECT_DOUBLE_EQ(tr.times.back(), 1.0);
}

TEST(Runner, ToleranceProfiles)
{
  EXPECT_EQ(parse_tolerance_profile("default"), ToleranceProfile::standard);
  EXPECT_EQ(parse_tolerance_profile("tight"), ToleranceProfile::tight);
  EXPECT_ANY_THROW(parse_tolerance_profile("loose"));
  EXPECT_LT(ode_tolerances(ToleranceProfile::tight).rtol, ode_tolerances(ToleranceProfile::standard).rtol);
}

TEST(Cli, ExitCodes)
{
  fs::path const dir = fresh_dir("cli");
  fs::create_directories(dir);
  fs::path const good = dir / "good.cfg", bad = dir / "bad.cfg", unknown = dir / "unknown.cfg";
  std::ofstream(good) << "n = 1\nh = 1e-2\nrmax = 10\n";
  std::ofstream(bad) << "p = 0.5\n";
  std::ofstream(unknown) << "colour = red\n";

  std::string const out = (dir / "out").string();
  EXPECT_EQ(cli("testfn --config " + good.string() + " --out " + out), 0);
  EXPECT_EQ(cli("testfn --config " + good.string() + " --out " + out), 2) << "overwrite without --force";
  EXPECT_EQ(cli("testfn --config " + good.string() + " --out " + out + " --force"), 0);
  EXPECT_EQ(cli("simulate --config " + bad.string() + " --out " + out + "_bad"), 2);
  EXPECT_EQ(cli("simulate --config " + unknown.string() + " --out " + out + "_bad"), 2);
  EXPECT_EQ(cli("simulate --tolerance-profile loose"), 2);
  EXPECT_EQ(cli("accept --only 1,3"), 0);
  fs::remove_all(dir);
}

TEST(Cli, DiagnoseReproducesCertificate)
{
  fs::path const dir = fresh_dir("diag");
  fs::create_directories(dir);
  std::ofstream(dir / "sim.cfg") << "n = 3\nh = 2e-2\ndt = 2e-2\nt_end = 2\n";
  std::string const out = (dir / "out").string();
  ASSERT_NE(cli("simulate --config " + (dir / "sim.cfg").string() + " --out " + out), 2);
  int const rc = cli("diagnose --trace " + out + "/run/trace.csv --summary " + out + "/run/summary.json --out " +
                     (dir / "cert.json").string());
  EXPECT_NE(rc, 2);
  ASSERT_TRUE(fs::exists(dir / "cert.json"));
  EXPECT_EQ(cli("diagnose --trace " + out + "/run/trace.csv --summary " + out + "/run/summary.json --out " +
                (dir / "cert.json").string()),
            2);
  fs::remove_all(dir);
}
