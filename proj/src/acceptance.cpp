#include "dwb/acceptance.hpp"

#include "dwb/weighted_estimates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <unistd.h>

namespace dwb
{

namespace
{

std::string num(double x, int digits = 6)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

CriterionResult strauss_criterion()
{
  CriterionResult r{1, "Strauss exponent", true, ""};
  double const p2 = strauss_exponent(2), p3 = strauss_exponent(3);
  double const want2 = (3.0 + std::sqrt(17.0)) / 2.0, want3 = 1.0 + std::numbers::sqrt2;
  double worst = 0.0;
  for (int n : {2, 3})
  {
    double const p = strauss_exponent(n);
    worst = std::max(worst, std::abs((n - 1) * p * p - (n + 1) * p - 2.0));
  }
  r.passed = std::abs(p2 - want2) <= 1e-12 * want2 && std::abs(p3 - want3) <= 1e-12 * want3 &&
             worst <= 1e-12 && std::isinf(strauss_exponent(1));
  r.detail = "p_c(2)=" + num(p2, 10) + " p_c(3)=" + num(p3, 10) + " quadratic residual " + num(worst, 3);
  return r;
}

CriterionResult testfn_criterion()
{
  CriterionResult r{2, "test functions", true, ""};
  for (int n : {1, 2, 3})
  {
    Dimension const dim = Dimension::make(n, 1.0);
    RadialGrid const grid = RadialGrid::with_spacing(dim.r0(), dim.r0() + 40.0, 1e-3);
    TestFunctionSet const tf = make_test_functions(dim, grid);
    double const rh = residual_harmonic(tf), re = residual_eigen(tf);
    double const rate_err = std::abs(phi1_growth_rate(tf) * std::numbers::sqrt2 - 1.0);
    bool ok = rh < 1e-4 && re < 1e-4 && rate_err < 0.02;
    r.detail += "n=" + std::to_string(n) + ": harm " + num(rh, 3) + " eig " + num(re, 3) + " rate err " +
                num(rate_err, 3);
    if (n == 1)
    {
      double worst = 0.0;
      for (std::size_t i = 1; i < grid.size() && grid.node(i) <= 10.0 + 1e-12; ++i)
      {
        double const exact = std::numbers::sqrt2 * std::sinh(grid.node(i) / std::numbers::sqrt2);
        worst = std::max(worst, std::abs(tf.phi1[i] / exact - 1.0));
      }
      ok = ok && worst < 1e-8;
      r.detail += " sinh err " + num(worst, 3);
    }
    r.detail += n < 3 ? "; " : "";
    r.passed = r.passed && ok;
  }
  return r;
}

CriterionResult ode_oracle_criterion(ToleranceProfile profile)
{
  CriterionResult r{3, "ODE blow-up oracle", false, ""};
  OdeBlowupSpec s;
  s.p = 3.0;
  s.a = 1.0;
  s.q = 0.0;
  s.k = 1.0;
  s.delta = 1.0;
  s.R = 1.0;
  BlowupReport const rep = integrate(s, 1.0, 1.0 / std::numbers::sqrt2, 1e6, ode_tolerances(profile));
  double const tol = profile == ToleranceProfile::tight ? 1e-5 : 1e-3;
  double const err = std::abs(rep.t_blowup_est - std::numbers::sqrt2);
  r.passed = rep.blew_up && err < tol;
  r.detail = "T=" + num(rep.t_blowup_est, 12) + " |T-sqrt2|=" + num(err, 3) + " (tol " + num(tol, 2) +
             ", " + to_string(profile) + ")";
  return r;
}

CriterionResult sideris_scan_criterion(ToleranceProfile profile, unsigned jobs)
{
  CriterionResult r{4, "supercritical grid scan", false, ""};
  GridScanOptions opts;
  opts.jobs = jobs;
  std::vector<GridCell> const cells =
      classify_grid({1.0, 1.5, 2.0, 2.5, 3.0}, {0.0, 0.5, 1.0, 1.5, 2.0}, {1.5, 2.0, 2.5, 3.0, 4.0}, opts,
                    ode_tolerances(profile));
  std::size_t super = 0, blown = 0, inconclusive = 0;
  double latest = 0.0;
  for (GridCell const &c : cells)
  {
    super += c.classification == Classification::supercritical ? 1 : 0;
    if (c.classification == Classification::supercritical && c.report.blew_up)
    {
      ++blown;
      latest = std::max(latest, c.report.t_blowup_est);
    }
    inconclusive += c.report.outcome == OdeOutcome::inconclusive ? 1 : 0;
  }
  r.passed = super == cells.size() && blown == super && inconclusive == 0;
  r.detail = std::to_string(cells.size()) + " cells, " + std::to_string(super) + " supercritical, " +
             std::to_string(blown) + " blew up, " + std::to_string(inconclusive) +
             " inconclusive, latest T=" + num(latest);
  return r;
}

CriterionResult threshold_criterion(ToleranceProfile profile)
{
  CriterionResult r{5, "critical threshold scan", false, ""};
  OdeBlowupSpec s;
  s.variant = OdeVariant::log_critical;
  s.p = strauss_exponent(2);
  s.a = 3.0 - s.p / 2.0;
  s.q = 2.0 * (s.p - 2.0) + 2.0;
  s.K1 = 1.0;
  s.T0 = 10.0;
  s.R = 1.0;
  std::vector<double> k0;
  for (int i = 0; i < 25; ++i)
    k0.push_back(std::pow(10.0, -2.0 + 6.0 * i / 24.0));
  ThresholdScan const scan = critical_threshold_scan(s, k0, 1e6, ode_tolerances(profile));
  std::size_t blown = 0;
  for (auto const &rep : scan.reports)
    blown += rep.blew_up ? 1 : 0;
  r.passed = scan.threshold.has_value() && scan.monotone;
  r.detail = "threshold K0=" + (scan.threshold ? num(*scan.threshold) : std::string("none")) + ", " +
             std::to_string(blown) + "/" + std::to_string(k0.size()) + " blew up, monotone=" +
             (scan.monotone ? "yes" : "no");
  return r;
}

CriterionResult estimates_criterion()
{
  CriterionResult r{6, "weighted integral decay rates", true, ""};
  struct Case
  {
    int n;
    double p;
  };
  for (Case c : {Case{1, 2.0}, Case{3, 2.0}, Case{2, strauss_exponent(2)}})
  {
    Dimension const dim = Dimension::make(c.n, 1.0);
    double const R = 3.0;
    RadialGrid const grid = RadialGrid::with_spacing(dim.r0(), 100.0 + R + 1e-3, 1e-3);
    TestFunctionSet const tf = make_test_functions(dim, grid);
    double const env = envelope_exponent(c.n, c.p);
    std::vector<double> ts, l7, l8;
    for (int i = 0; i < 16; ++i)
    {
      double const t = std::pow(10.0, 1.0 + i / 15.0);
      ts.push_back(t);
      l7.push_back(log_integral_lemma7(tf, c.p, t, R));
      l8.push_back(log_integral_lemma8(tf, c.p, t, R));
    }
    EstimateFit const f7 = fit_decay_log(ts, l7, R, std::nullopt, DecayBound{env, 0.0});
    EstimateFit const f8 = fit_decay_log(ts, l8, R, std::nullopt, DecayBound{env, 0.0});
    bool ok = std::abs(f7.fitted_exponent - env) <= 0.1 && std::abs(f8.fitted_exponent - env) <= 0.1;
    r.detail += "n=" + std::to_string(c.n) + " target " + num(env, 4) + " fits " +
                num(f7.fitted_exponent, 4) + "/" + num(f8.fitted_exponent, 4);
    if (c.n == 2)
    {
      double const lc = -1.0 / (c.p - 1.0);
      EstimateFit const fl = fit_decay_log(ts, l8, R, lc, DecayBound{env, lc});
      bool const bounded = std::isfinite(fl.max_ratio) && ratio_nonincreasing_final_decade(fl);
      ok = ok && bounded;
      r.detail += " log-corrected max_ratio " + num(fl.max_ratio, 3) + (bounded ? " bounded" : " unbounded");
    }
    r.detail += c.n == 2 ? "" : "; ";
    r.passed = r.passed && ok;
  }
  return r;
}

std::string simulate_config(AcceptanceOptions const &opts)
{
  return "kind = simulate\nn = 3\nr0 = 1\np = 2\nR = 3\nprofile = bump\nbump_center = 2\nbump_width = 1\n"
         "t_end = 200\nh = " +
         format_double(opts.h) + "\ndt = " + format_double(opts.dt) + "\n";
}

Json load_summary(std::filesystem::path const &dir, std::string const &id)
{
  return Json::parse(read_file(dir / id / "summary.json"));
}

} // namespace

std::string format_result(CriterionResult const &r)
{
  return std::string(r.passed ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.title + ": " +
         r.detail;
}

std::vector<CriterionResult> run_acceptance(AcceptanceOptions const &opts,
                                            std::function<void(CriterionResult const &)> const &on_result)
{
  namespace fs = std::filesystem;
  std::vector<CriterionResult> out;
  auto wanted = [&](int id) {
    return opts.only.empty() || std::find(opts.only.begin(), opts.only.end(), id) != opts.only.end();
  };
  auto emit = [&](CriterionResult r) {
    if (on_result)
      on_result(r);
    out.push_back(std::move(r));
  };
  auto guarded = [&](int id, char const *title, auto &&fn) {
    if (!wanted(id))
      return;
    try
    {
      emit(fn());
    }
    catch (std::exception const &e)
    {
      emit(CriterionResult{id, title, false, std::string("error: ") + e.what()});
    }
  };

  guarded(1, "Strauss exponent", [] { return strauss_criterion(); });
  guarded(2, "test functions", [] { return testfn_criterion(); });
  guarded(3, "ODE blow-up oracle", [&] { return ode_oracle_criterion(opts.profile); });
  guarded(4, "supercritical grid scan", [&] { return sideris_scan_criterion(opts.profile, opts.jobs); });
  guarded(5, "critical threshold scan", [&] { return threshold_criterion(opts.profile); });
  guarded(6, "weighted integral decay rates", [] { return estimates_criterion(); });

  bool const need_sim = wanted(7) || wanted(8) || wanted(9) || wanted(10);
  if (!need_sim)
    return out;

  bool const temporary = !opts.out_dir;
  fs::path const root = temporary ? fs::temp_directory_path() / ("dwb-accept-" + std::to_string(::getpid()))
                                  : *opts.out_dir;
  RunnerOptions ro;
  ro.force = opts.force || temporary;
  ro.jobs = opts.jobs;
  ro.profile = opts.profile;

  // Plan 7, then the same plan again for the determinism check.
  std::string const base = simulate_config(opts);
  std::optional<Json> s7;
  std::string plan7_error;
  try
  {
    ExperimentPlan plan = parse_config("name = plan7\n[run7]\n" + base + "eps = 1\n");
    ro.out_dir = root / "plan7";
    run_plan(plan, ro);
    s7 = load_summary(ro.out_dir, "run7");
  }
  catch (std::exception const &e)
  {
    plan7_error = e.what();
  }

  guarded(7, "simulated blow-up", [&] {
    CriterionResult r{7, "simulated blow-up", false, ""};
    if (!s7)
      throw std::runtime_error(plan7_error);
    Json const &rep = (*s7)["report"];
    Json const &cert = (*s7)["certificate"];
    Json const &a = (*s7)["audits"];
    bool const blew = rep["blew_up"].get<bool>();
    r.passed = blew && a["support"] == "pass" && a["lemma9"] == "pass" && a["identity"] == "pass" &&
               a["inequality"] == "pass" && a["f0_exponent"] == "pass";
    r.detail = std::string("blew_up=") + (blew ? "yes" : "no") + " T=" +
               num(rep["t_blowup_est"].get<double>()) + "; support " + a["support"].get<std::string>() +
               " (tail ratio " + num(rep["max_tail_ratio"].get<double>(), 3) + "); lemma9 " +
               a["lemma9"].get<std::string>() + "; identity " + a["identity"].get<std::string>();
    if (cert.contains("identity"))
      r.detail += " (" + num(cert["identity"]["relative_residual"].get<double>(), 3) + ")";
    r.detail += "; inequality " + a["inequality"].get<std::string>();
    if (cert.contains("inequality"))
      r.detail += " (k_fit " + num(cert["inequality"]["k_fit"].get<double>(), 4) + " vs " +
                  num(cert["inequality"]["k_theory"].get<double>(), 4) + ", " +
                  std::to_string(cert["inequality"]["violations"].get<std::size_t>()) + " violations)";
    r.detail += "; F0 exponent " + a["f0_exponent"].get<std::string>();
    if (cert.contains("lower_bound"))
      r.detail += " (" + num(cert["lower_bound"]["exponent_fit"].get<double>(), 4) + " vs " +
                  num(cert["lower_bound"]["target_exponent"].get<double>(), 4) + ")";
    return r;
  });

  guarded(8, "amplitude monotonicity", [&] {
    CriterionResult r{8, "amplitude monotonicity", false, ""};
    if (!s7)
      throw std::runtime_error(plan7_error);
    ExperimentPlan plan = parse_config("name = eps_sweep\n[sweep]\n" + base + "eps = 0.5, 2\n");
    ro.out_dir = root / "eps_sweep";
    run_plan(plan, ro);
    Json const lo = load_summary(ro.out_dir, "sweep_eps0.5");
    Json const hi = load_summary(ro.out_dir, "sweep_eps2");
    double const t[3] = {lo["report"]["t_blowup_est"].get<double>(), (*s7)["report"]["t_blowup_est"].get<double>(),
                         hi["report"]["t_blowup_est"].get<double>()};
    bool const all_blew = lo["report"]["blew_up"].get<bool>() && (*s7)["report"]["blew_up"].get<bool>() &&
                          hi["report"]["blew_up"].get<bool>();
    r.passed = all_blew && t[0] > t[1] && t[1] > t[2];
    r.detail = "T(eps=0.5)=" + num(t[0]) + " T(eps=1)=" + num(t[1]) + " T(eps=2)=" + num(t[2]);
    return r;
  });

  guarded(9, "ODE/PDE consistency", [&] {
    CriterionResult r{9, "ODE/PDE consistency", false, ""};
    if (!s7)
      throw std::runtime_error(plan7_error);
    Json const &cert = (*s7)["certificate"];
    if (!cert.contains("ode_consistency"))
      throw std::runtime_error("no fitted constants in the run 7 certificate");
    Json const &o = cert["ode_consistency"];
    r.passed = o["ok"].get<bool>();
    r.detail = "k=" + num(o["k"].get<double>(), 4) + " delta=" + num(o["delta"].get<double>(), 4) +
               " T_ode=" + num(o["report"]["t_blowup_est"].get<double>()) +
               " T_pde=" + num(cert["blowup"]["t_blowup_est"].get<double>()) +
               " ratio=" + num(o["ratio_to_pde"].get<double>(), 4);
    return r;
  });

  guarded(10, "determinism", [&] {
    CriterionResult r{10, "determinism", false, ""};
    if (!s7)
      throw std::runtime_error(plan7_error);
    ExperimentPlan plan = parse_config("name = plan7\n[run7]\n" + base + "eps = 1\n");
    RunnerOptions again = ro;
    again.out_dir = root / "plan7_repeat";
    run_plan(plan, again);
    r.passed = true;
    for (char const *name : {"trace.csv", "summary.json"})
    {
      std::string const a = read_file(root / "plan7" / "run7" / name);
      std::string const b = read_file(again.out_dir / "run7" / name);
      r.passed = r.passed && a == b;
      r.detail += std::string(r.detail.empty() ? "" : ", ") + name + " " + std::to_string(a.size()) +
                  " bytes " + (a == b ? "identical" : "differs");
    }
    return r;
  });

  if (temporary)
  {
    std::error_code ec;
    fs::remove_all(root, ec);
  }
  return out;
}

} // namespace dwb
